use std::sync::Arc;

use proptest::prelude::*;
use solomon_core::classgrp::{self, act_group_ring, compose_raw, ClassGroup, Form, TowerDataRow};
use solomon_core::cyclo::{Place, DEFAULT_DEGREE_CAP};
use solomon_core::fields::{fundamental_discriminants, AbelianFieldSpec};
use solomon_core::groupring::{ideal_basis, GroupRingElement};
use solomon_core::padic::{digits, PadicContext, PadicElement};
use solomon_core::regulators::{fundamental_unit, lambda_of_unit};
use solomon_core::report::{merge, ReportLine};
use solomon_core::verify::{self, RunConfig};

fn ctx(p: u64, d: usize, n: u32) -> Arc<PadicContext> {
    PadicContext::shared(p, d, n).unwrap()
}

fn elem(c: &Arc<PadicContext>, raw: &[u64]) -> PadicElement {
    let m = c.modulus_int();
    let coeffs = raw.iter().take(c.degree()).map(|&x| x as u128 % m).collect();
    PadicElement::from_coeffs(c, coeffs, c.precision())
}

fn same(a: &PadicElement, b: &PadicElement) -> bool {
    (a - b).is_zero()
}

fn sl2() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    // products of elementary matrices stay in SL2(Z)
    prop::collection::vec((0..2u8, -3i64..=3), 1..5).prop_map(|steps| {
        let (mut a, mut b, mut c, mut d) = (1i64, 0i64, 0i64, 1i64);
        for (kind, k) in steps {
            if kind == 0 {
                b += a * k;
                d += c * k;
            } else {
                a += b * k;
                c += d * k;
            }
        }
        (a, b, c, d)
    })
}

fn transform(f: &Form, (al, be, ga, de): (i64, i64, i64, i64)) -> Form {
    Form::new(
        f.a * al * al + f.b * al * ga + f.c * ga * ga,
        2 * f.a * al * be + f.b * (al * de + be * ga) + 2 * f.c * ga * de,
        f.a * be * be + f.b * be * de + f.c * de * de,
    )
}

fn groups() -> Vec<ClassGroup> {
    fundamental_discriminants(2000)
        .into_iter()
        .filter_map(|d| ClassGroup::new(d).ok())
        .filter(|g| g.narrow_order() > 1)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in prop::sample::select(vec![3u64, 5, 7, 11]), d in 1usize..4,
                 a in prop::collection::vec(any::<u64>(), 3),
                 b in prop::collection::vec(any::<u64>(), 3),
                 c in prop::collection::vec(any::<u64>(), 3)) {
        let k = ctx(p, d, 10);
        let (a, b, c) = (elem(&k, &a), elem(&k, &b), elem(&k, &c));
        prop_assert!(same(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
        prop_assert!(same(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
        prop_assert!(same(&(&a * &b), &(&b * &a)));
        prop_assert!(same(&(&(&a + &b) - &b), &a));
        if a.valuation() == Some(0) {
            prop_assert!(same(&(&a * &a.inverse().unwrap()), &PadicElement::one(&k)));
        }
    }

    #[test]
    fn log_is_additive(p in prop::sample::select(vec![3u64, 5, 7, 13]), d in 1usize..3,
                       a in prop::collection::vec(any::<u64>(), 2),
                       b in prop::collection::vec(any::<u64>(), 2)) {
        let k = ctx(p, d, 12);
        let (x, y) = (elem(&k, &a), elem(&k, &b));
        prop_assume!(x.valuation() == Some(0) && y.valuation() == Some(0));
        let lhs = (&x * &y).iwasawa_log().unwrap();
        let rhs = &x.iwasawa_log().unwrap() + &y.iwasawa_log().unwrap();
        let n = lhs.precision().min(rhs.precision());
        prop_assert!(lhs.agrees_with(&rhs, n));
        // Frobenius commutes with log
        let fl = x.frobenius().iwasawa_log().unwrap();
        prop_assert!(fl.agrees_with(&x.iwasawa_log().unwrap().frobenius(), n));
    }

    #[test]
    fn digits_round_trip(p in prop::sample::select(vec![2u64, 3, 5, 7, 31, 37, 101]), n in 1u32..12, v in any::<u64>()) {
        let m = (p as u128).pow(n);
        let x = v as u128 % m;
        let s = digits::encode(x, p, n);
        prop_assert_eq!(digits::decode(&s, p).unwrap(), (x, n));
    }

    #[test]
    fn howell_form_ignores_presentation(
        gens in prop::collection::vec(prop::collection::vec(0i128..125, 6), 1..3),
        mix in prop::collection::vec(-4i128..5, 3),
        shift in 0usize..6,
    ) {
        let field = Arc::new(AbelianFieldSpec::new(13, &[12]).unwrap());
        let elems: Vec<GroupRingElement> =
            gens.iter().map(|c| GroupRingElement::from_signed(&field, 5, 3, c).unwrap()).collect();
        let base = ideal_basis(&elems).unwrap();
        let mut other: Vec<GroupRingElement> = elems.iter().rev().map(|e| e.translate(shift)).collect();
        let mut combo = elems[0].scale(mix[0]);
        for (e, &k) in elems.iter().zip(&mix).skip(1) {
            combo = combo.add(&e.scale(k)).unwrap();
        }
        other.push(combo.translate((shift + 1) % 6));
        let alt = ideal_basis(&other).unwrap();
        prop_assert_eq!(base.basis(), alt.basis());
        prop_assert!(base.contains_ideal(&alt) && alt.contains_ideal(&base));
    }

    #[test]
    fn class_is_sl2_invariant(idx in any::<prop::sample::Index>(), m in sl2()) {
        let gs = groups();
        let g = idx.get(&gs);
        for i in 0..g.narrow_order() {
            let f = g.cycle(i)[0];
            prop_assert_eq!(g.class_of_form(&transform(&f, m)).unwrap(), i);
        }
    }

    #[test]
    fn composition_is_well_defined(idx in any::<prop::sample::Index>(), m1 in sl2(), m2 in sl2(),
                                   i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let gs = groups();
        let g = idx.get(&gs);
        let classes: Vec<usize> = (0..g.narrow_order()).collect();
        let (i, j) = (*i.get(&classes), *j.get(&classes));
        let f1 = transform(g.cycle(i).iter().find(|f| f.a > 0).unwrap(), m1);
        let f2 = transform(g.cycle(j).iter().find(|f| f.a > 0).unwrap(), m2);
        prop_assume!(f1.a > 0 && f2.a > 0);
        prop_assert_eq!(g.class_of_form(&compose_raw(&f1, &f2)).unwrap(), g.compose(i, j));
    }

    #[test]
    fn action_factors_through_precision(coeffs in prop::collection::vec(0u128..6561, 2), e in 1u32..4, c in any::<prop::sample::Index>()) {
        let field = Arc::new(AbelianFieldSpec::real_quadratic(316).unwrap());
        let (group, _, _) = classgrp::class_group(316).unwrap();
        let cls: Vec<usize> = (0..group.narrow_order()).collect();
        let c = *c.get(&cls);
        let theta = GroupRingElement::from_coeffs(&field, 3, 8, coeffs.clone()).unwrap();
        let low = theta.with_precision(e);
        prop_assert_eq!(act_group_ring(&theta, &group, c, e).unwrap(), act_group_ring(&low, &group, c, e).unwrap());
        let shifted: Vec<u128> = coeffs.iter().map(|&a| (a + 3u128.pow(e)) % 6561).collect();
        let theta2 = GroupRingElement::from_coeffs(&field, 3, 8, shifted).unwrap();
        prop_assert_eq!(act_group_ring(&theta, &group, c, e).unwrap(), act_group_ring(&theta2, &group, c, e).unwrap());
    }

    #[test]
    fn tower_rows_round_trip(n_layers in 1u32..5, base in 0u32..3, p in prop::sample::select(vec![3u64, 5, 7])) {
        let rows: Vec<TowerDataRow> = (0..n_layers).map(|n| TowerDataRow {
            f: 316,
            h: vec![3],
            p,
            n,
            h_n: (p.pow(base + n) * 2).to_string(),
            dn_order: p.pow(base).to_string(),
            provenance: format!("layer {n}"),
        }).collect();
        let text = classgrp::emit_tower_data(&rows);
        prop_assert_eq!(classgrp::parse_tower_data(&text).unwrap(), rows);
    }
}

#[test]
fn associativity_and_inverses() {
    for g in groups().iter().take(200) {
        let n = g.narrow_order();
        for i in 0..n {
            assert_inverse(g, i);
            for j in 0..n {
                for k in 0..n.min(4) {
                    assert_eq!(g.compose(g.compose(i, j), k), g.compose(i, g.compose(j, k)));
                }
                assert_eq!(g.compose(i, j), g.compose(j, i));
            }
        }
    }
}

fn assert_inverse(g: &ClassGroup, i: usize) {
    assert_eq!(g.compose(i, g.inverse(i)), g.principal());
    assert_eq!(g.compose(i, g.principal()), i);
}

#[test]
fn units_obey_product_formula() {
    // the logs of the conjugates of a unit sum to log of its norm, which is 0
    for d in fundamental_discriminants(400) {
        for p in [3u64, 5, 7, 11, 13] {
            let field = AbelianFieldSpec::real_quadratic(d).unwrap();
            let Ok(place) = Place::new(&field, p, 12, 1, DEFAULT_DEGREE_CAP) else { continue };
            let u = fundamental_unit(d).unwrap();
            let l = lambda_of_unit(&u, &place).unwrap();
            let s = &l[0] + &l[1];
            assert!(s.is_zero() || s.valuation().unwrap() >= s.precision(), "D = {d}, p = {p}");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let field = Arc::new(AbelianFieldSpec::new(7, &[6]).unwrap());
    let cfg = RunConfig { p: 13, ..RunConfig::default() };
    let a = verify::lp_report(&field, &cfg).unwrap();
    let b = verify::lp_report(&field, &cfg).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let line = |r| ReportLine { report: r, envelope: Default::default() };
    let (merged, summary) = merge(&[vec![line(a)], vec![line(b)]]);
    assert_eq!(merged.len(), 1);
    assert_eq!(summary.duplicates, 1);
    assert!(summary.conflicts.is_empty());
}

#[test]
fn s_unit_enlarges_the_unit_lattice() {
    let g = ClassGroup::new(8).unwrap();
    let pi = classgrp::prime_power_generator(&g, 7).unwrap();
    assert_eq!(pi.k, 1);
    assert!(pi.norm_holds());

    let mut checked = 0;
    let mut strict = 0;
    for d in fundamental_discriminants(1000) {
        let field = AbelianFieldSpec::real_quadratic(d).unwrap();
        for p in [3u64, 5, 7, 11, 13] {
            let Ok(place) = Place::new(&field, p, 16, 1, DEFAULT_DEGREE_CAP) else { continue };
            let g = ClassGroup::new(d).unwrap();
            let pi = classgrp::prime_power_generator(&g, p).unwrap();
            assert!(pi.norm_holds(), "D = {d}, p = {p}");
            let c = solomon_core::regulators::gross_comparison(&field, &place, 4).unwrap();
            assert!(c.v_gross <= c.v_leop, "D = {d}, p = {p}: {c:?}");
            checked += 1;
            strict += (c.v_gross < c.v_leop) as usize;
        }
    }
    assert!(checked > 300);
    assert!(strict > 0, "the S-unit never enlarged the lattice");
}
