use num_traits::ToPrimitive;
use solomon_core::classgrp::{class_group, class_number};
use solomon_core::fields::{fundamental_discriminants, kronecker};
use solomon_core::padic::arith::is_prime_u64;
use solomon_core::regulators::fundamental_unit;

fn log_epsilon(d: i64) -> f64 {
    let u = fundamental_unit(d).unwrap();
    let x = u.x.to_f64().unwrap();
    let y = u.y.to_f64().unwrap();
    ((x + y * (d as f64).sqrt()) / 2.0).ln()
}

// h log(eps) = -1/2 sum_{a<D} chi(a) log sin(pi a / D)
fn analytic_class_number(d: i64) -> f64 {
    let s: f64 = (1..d)
        .map(|a| kronecker(d, a as u64) as f64 * (std::f64::consts::PI * a as f64 / d as f64).sin().ln())
        .sum();
    -s / (2.0 * log_epsilon(d))
}

#[test]
fn class_number_formula() {
    for d in fundamental_discriminants(1500) {
        let h = class_number(d).unwrap() as f64;
        let analytic = analytic_class_number(d);
        assert!((h - analytic).abs() < 1e-6, "D = {d}: forms give {h}, analytic {analytic}");
    }
}

#[test]
fn tabulated_class_numbers() {
    for (d, h) in [(5, 1), (8, 1), (12, 1), (40, 2), (60, 2), (65, 2), (229, 3), (257, 3), (316, 3), (321, 3), (1345, 6)] {
        assert_eq!(class_number(d).unwrap(), h, "D = {d}");
    }
    let (_, structure, _) = class_group(1345).unwrap();
    assert_eq!(structure, vec![6]);
}

#[test]
fn kronecker_matches_euler() {
    for d in fundamental_discriminants(400) {
        for q in (3..200u64).filter(|&q| is_prime_u64(q)) {
            let r = (d.rem_euclid(q as i64)) as u64;
            let e = if r == 0 {
                0
            } else {
                let mut acc = 1u64;
                for _ in 0..(q - 1) / 2 {
                    acc = acc * r % q;
                }
                if acc == 1 { 1 } else { -1 }
            };
            assert_eq!(kronecker(d, q), e, "({d}/{q})");
        }
    }
}

#[test]
fn units_satisfy_pell() {
    for d in fundamental_discriminants(3000) {
        let u = fundamental_unit(d).unwrap();
        assert!(u.pell_holds(), "D = {d}");
        // a negative norm unit exists only when every odd prime divisor is 1 mod 4
        if u.norm == -1 {
            let mut n = d;
            while n % 2 == 0 {
                n /= 2;
            }
            for q in 3..=d {
                while n % q == 0 {
                    assert_eq!(q % 4, 1, "D = {d}");
                    n /= q;
                }
            }
        }
    }
}
