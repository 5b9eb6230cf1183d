//! Dense polynomials over the prime field F_p, used only to pick the
//! defining polynomial of a residue field extension.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub fn x() -> Self {
        FpPoly { coeffs: vec![0, 1] }
    }

    pub fn one() -> Self {
        FpPoly { coeffs: vec![1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn sub(&self, other: &Self, p: u64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        FpPoly::new(c)
    }

    pub fn mul(&self, other: &Self, p: u64) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(vec![]);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % p;
            }
        }
        FpPoly::new(c)
    }

    pub fn rem(&self, modulus: &Self, p: u64) -> Self {
        let dm = modulus.degree().expect("nonzero modulus");
        let inv_lead = inv_small(modulus.lead(), p);
        let mut r = self.coeffs.clone();
        while r.len() > dm && !r.is_empty() {
            let top = *r.last().unwrap();
            if top == 0 {
                r.pop();
                continue;
            }
            let shift = r.len() - 1 - dm;
            let q = top * inv_lead % p;
            for (i, &m) in modulus.coeffs.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - q * m % p) % p;
            }
            r.pop();
        }
        FpPoly::new(r)
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self, p: u64) -> Self {
        self.mul(other, p).rem(modulus, p)
    }

    pub fn pow_mod(&self, mut exp: u128, modulus: &Self, p: u64) -> Self {
        let mut base = self.rem(modulus, p);
        let mut acc = FpPoly::one().rem(modulus, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, modulus, p);
            }
            base = base.mul_mod(&base, modulus, p);
            exp >>= 1;
        }
        acc
    }

    pub fn gcd(&self, other: &Self, p: u64) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = inv_small(a.lead(), p);
        FpPoly::new(a.coeffs.iter().map(|&c| c * inv % p).collect())
    }
}

pub fn inv_small(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial of degree `d`.
pub fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let x = FpPoly::x();
    // x^(p^d) == x mod f
    let mut xp = x.rem(f, p);
    for _ in 0..d {
        xp = xp.pow_mod(p as u128, f, p);
    }
    if xp != x.rem(f, p) {
        return false;
    }
    for (q, _) in super::arith::factor_u64(d as u64) {
        let k = d / q as usize;
        let mut xq = x.rem(f, p);
        for _ in 0..k {
            xq = xq.pow_mod(p as u128, f, p);
        }
        let g = xq.sub(&x, p).gcd(f, p);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Whether the class of `x` generates `(F_p[x]/f)^*`, given the prime
/// divisors of `p^d - 1`.
pub fn root_is_primitive(f: &FpPoly, p: u64, order: u128, primes: &[u128]) -> bool {
    let x = FpPoly::x();
    let one = FpPoly::one();
    primes
        .iter()
        .all(|&q| x.pow_mod(order / q, f, p) != one.rem(f, p))
}
