use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::arith::{self, add_mod, mul_mod, neg_mod, sub_mod};
use super::context::{monomial, pow_raw, PadicContext};
use crate::error::{Error, Result};

/// An element of `Z_{p^d}` known modulo `p^prec`, stored as a coefficient
/// vector in the power basis of the context's Teichmuller generator.
#[derive(Clone)]
pub struct PadicElement {
    ctx: Arc<PadicContext>,
    coeffs: Vec<u128>,
    prec: u32,
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PadicElement(p={}, d={}, prec={}, {:?})",
            self.ctx.p(),
            self.ctx.degree(),
            self.prec,
            self.coeffs
        )
    }
}

impl PadicElement {
    pub fn from_coeffs(ctx: &Arc<PadicContext>, coeffs: Vec<u128>, prec: u32) -> Self {
        assert_eq!(coeffs.len(), ctx.degree(), "coefficient vector length must equal d");
        let prec = prec.min(ctx.precision());
        let m = prime_power(ctx.p(), prec);
        let coeffs = coeffs.into_iter().map(|c| c % ctx.modulus_int() % m).collect();
        PadicElement { ctx: ctx.clone(), coeffs, prec }
    }

    pub fn zero(ctx: &Arc<PadicContext>) -> Self {
        PadicElement { ctx: ctx.clone(), coeffs: vec![0; ctx.degree()], prec: ctx.precision() }
    }

    pub fn one(ctx: &Arc<PadicContext>) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn from_int(ctx: &Arc<PadicContext>, n: i128) -> Self {
        let mut coeffs = vec![0; ctx.degree()];
        coeffs[0] = arith::from_i128(n, ctx.modulus_int());
        PadicElement { ctx: ctx.clone(), coeffs, prec: ctx.precision() }
    }

    /// Embeds a residue mod `p^prec` into the `Z_p` subring.
    pub fn from_zp(ctx: &Arc<PadicContext>, value: u128, prec: u32) -> Self {
        let mut coeffs = vec![0; ctx.degree()];
        coeffs[0] = value;
        Self::from_coeffs(ctx, coeffs, prec)
    }

    /// The context's generator of the roots of unity of order `p^d - 1`.
    pub fn teich_gen(ctx: &Arc<PadicContext>) -> Self {
        PadicElement {
            ctx: ctx.clone(),
            coeffs: ctx.teich_gen_raw().to_vec(),
            prec: ctx.precision(),
        }
    }

    /// Teichmuller lift of a nonzero residue-field element, given by its
    /// coordinates in the residue power basis.
    pub fn teichmuller(ctx: &Arc<PadicContext>, residue: &[u64]) -> Result<Self> {
        if residue.len() != ctx.degree() {
            return Err(Error::Mismatch("residue vector length differs from d".into()));
        }
        let p = ctx.p();
        if residue.iter().all(|&c| c % p == 0) {
            return Err(Error::ZeroInput("Teichmuller lift of zero"));
        }
        let mut y: Vec<u128> = residue.iter().map(|&c| (c % p) as u128).collect();
        let exp = ctx.unit_order() + 1;
        for _ in 0..=ctx.precision() {
            let next = pow_raw(&y, exp, ctx.modulus_coeffs(), ctx.modulus_int());
            if next == y {
                break;
            }
            y = next;
        }
        Ok(PadicElement { ctx: ctx.clone(), coeffs: y, prec: ctx.precision() })
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::from_coeffs(&self.ctx, self.coeffs.clone(), prec.min(self.prec))
    }

    fn check_same(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx,
            "p-adic operands from different contexts"
        );
    }

    fn reduced(ctx: &Arc<PadicContext>, coeffs: Vec<u128>, prec: u32) -> Self {
        let prec = prec.min(ctx.precision());
        if prec == ctx.precision() {
            PadicElement { ctx: ctx.clone(), coeffs, prec }
        } else {
            Self::from_coeffs(ctx, coeffs, prec)
        }
    }

    /// `v_p`, or `None` if the element is zero at its known precision.
    pub fn valuation(&self) -> Option<u32> {
        let v = self
            .coeffs
            .iter()
            .map(|&c| arith::val_mod(c, self.ctx.p(), self.ctx.precision()))
            .min()
            .unwrap_or(self.prec);
        (v < self.prec).then_some(v)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Equality modulo `p^digits`; `digits` is clamped to both precisions.
    pub fn agrees_with(&self, other: &Self, digits: u32) -> bool {
        self.check_same(other);
        let k = digits.min(self.prec).min(other.prec);
        let m = prime_power(self.ctx.p(), k);
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a % m == b % m)
    }

    /// Number of agreeing low-order digits (capped at the common precision).
    pub fn agreement(&self, other: &Self) -> u32 {
        let diff = self - other;
        diff.valuation().unwrap_or(diff.prec)
    }

    pub fn scale(&self, k: i128) -> Self {
        let m = self.ctx.modulus_int();
        let s = arith::from_i128(k, m);
        let coeffs = self.coeffs.iter().map(|&c| mul_mod(c, s, m)).collect();
        Self::reduced(&self.ctx, coeffs, self.prec)
    }

    pub fn pow(&self, exp: u128) -> Self {
        let c = pow_raw(&self.coeffs, exp, self.ctx.modulus_coeffs(), self.ctx.modulus_int());
        Self::reduced(&self.ctx, c, self.prec)
    }

    /// Signed exponent; negative powers require a unit.
    pub fn pow_signed(&self, exp: i64) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u128))
        } else {
            Ok(self.inverse()?.pow(exp.unsigned_abs() as u128))
        }
    }

    /// Exact division by `p^k`; the element must be divisible and loses `k`
    /// digits of precision.
    pub fn div_p_power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if self.prec <= k {
            return Err(Error::InsufficientPrecision(format!(
                "dividing by p^{k} needs more than {} known digits",
                self.prec
            )));
        }
        let pk = prime_power(self.ctx.p(), k);
        let known = prime_power(self.ctx.p(), self.prec);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            let c = c % known;
            if c % pk != 0 {
                return Err(Error::SelfCheck(format!("element is not divisible by p^{k}")));
            }
            coeffs.push(c / pk);
        }
        Ok(Self::from_coeffs(&self.ctx, coeffs, self.prec - k))
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Self> {
        if self.valuation() != Some(0) {
            return Err(Error::ZeroInput("inverse of a non-unit"));
        }
        let ctx = &self.ctx;
        let m = ctx.modulus_int();
        let modulus = ctx.modulus_coeffs();
        // residue inverse: a^(p^d - 2) is correct mod p
        let mut y = pow_raw(&self.coeffs, ctx.unit_order() - 1, modulus, m);
        let two = {
            let mut t = vec![0u128; ctx.degree()];
            t[0] = 2;
            t
        };
        let mut correct = 1u32;
        while correct < ctx.precision() {
            let ay = ctx.mul_raw(&self.coeffs, &y);
            let corr: Vec<u128> = two.iter().zip(&ay).map(|(&a, &b)| sub_mod(a, b, m)).collect();
            y = ctx.mul_raw(&y, &corr);
            correct *= 2;
        }
        Ok(Self::reduced(ctx, y, self.prec))
    }

    /// Arithmetic Frobenius, `x -> x^p` on the Teichmuller generator.
    pub fn frobenius(&self) -> Self {
        let ctx = &self.ctx;
        let m = ctx.modulus_int();
        let mut out = vec![0u128; ctx.degree()];
        for (a, img) in self.coeffs.iter().zip(ctx.frob_images()) {
            if *a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(img) {
                *o = add_mod(*o, mul_mod(*a, b, m), m);
            }
        }
        Self::reduced(ctx, out, self.prec)
    }

    /// Whether the element lies in the `Z_p` subring at its known precision.
    pub fn is_rational(&self) -> bool {
        let m = prime_power(self.ctx.p(), self.prec);
        self.coeffs[1..].iter().all(|&c| c % m == 0)
    }

    /// The `Z_p` value of a rational element as a residue mod `p^prec`.
    pub fn rational_value(&self) -> Result<u128> {
        if !self.is_rational() {
            return Err(Error::SelfCheck("element is not Frobenius-fixed".into()));
        }
        Ok(self.coeffs[0] % prime_power(self.ctx.p(), self.prec))
    }

    /// Residue-field image in the residue power basis.
    pub fn residue(&self) -> Vec<u64> {
        let p = self.ctx.p() as u128;
        self.coeffs.iter().map(|&c| (c % p) as u64).collect()
    }

    /// Iwasawa logarithm: the branch of `log_p` on `Q_{p^d}^*` with
    /// `log_p(p) = 0`, which also kills roots of unity.
    ///
    /// Writes `x = p^v * y` with `y` a unit, raises `y` to `p^d - 1` to land in
    /// the principal units, and sums the logarithm series. Digits consumed by
    /// the `1/k` denominators are subtracted from the result's precision.
    pub fn iwasawa_log(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::ZeroInput("logarithm of zero"))?;
        let unit = self.div_p_power(v)?;
        let ctx = &self.ctx;
        let p = ctx.p();
        let m = ctx.modulus_int();
        let prec = unit.prec;
        let u = unit.pow(ctx.unit_order());
        let mut z = u.coeffs.clone();
        z[0] = sub_mod(z[0], 1, m);

        let mut sum = vec![0u128; ctx.degree()];
        let mut power = z.clone();
        let mut loss = 0u32;
        let mut k: u64 = 1;
        loop {
            // v(z^k / k) >= k - floor(log_p k), which is nondecreasing in k
            if k as i64 - floor_log(k, p) as i64 >= prec as i64 {
                break;
            }
            let vk = if k % p == 0 { arith::val_u128(k as u128, p) } else { 0 };
            if (k as i64) - (vk as i64) < prec as i64 {
                let pk = prime_power(p, vk);
                let unit_part = (k as u128) / pk;
                let inv = arith::inv_mod_prime_power(unit_part % m, p, m).expect("unit");
                let mut term = Vec::with_capacity(power.len());
                for &c in &power {
                    if c % pk != 0 {
                        return Err(Error::InsufficientPrecision(
                            "logarithm series term is not divisible as expected".into(),
                        ));
                    }
                    term.push(mul_mod(c / pk, inv, m));
                }
                loss = loss.max(vk);
                for (s, t) in sum.iter_mut().zip(term) {
                    *s = if k % 2 == 1 { add_mod(*s, t, m) } else { sub_mod(*s, t, m) };
                }
            }
            power = ctx.mul_raw(&power, &z);
            k += 1;
        }
        if loss >= prec {
            return Err(Error::InsufficientPrecision(format!(
                "logarithm needs {loss} guard digits but only {prec} are known"
            )));
        }
        // log(y) = log(y^(p^d-1)) / (p^d-1)
        let q_inv = arith::inv_mod_prime_power(ctx.unit_order() % m, p, m).expect("unit");
        let out = sum.iter().map(|&s| mul_mod(s, q_inv, m)).collect();
        Ok(Self::from_coeffs(ctx, out, prec - loss))
    }
}

fn floor_log(k: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut acc = p;
    while acc <= k {
        acc *= p;
        e += 1;
    }
    e
}

pub(crate) fn prime_power(p: u64, k: u32) -> u128 {
    (p as u128).pow(k)
}

impl<'a> Add<&'a PadicElement> for &'a PadicElement {
    type Output = PadicElement;
    fn add(self, rhs: &PadicElement) -> PadicElement {
        self.check_same(rhs);
        let m = self.ctx.modulus_int();
        let c = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| add_mod(a, b, m)).collect();
        PadicElement::reduced(&self.ctx, c, self.prec.min(rhs.prec))
    }
}

impl<'a> Sub<&'a PadicElement> for &'a PadicElement {
    type Output = PadicElement;
    fn sub(self, rhs: &PadicElement) -> PadicElement {
        self.check_same(rhs);
        let m = self.ctx.modulus_int();
        let c = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| sub_mod(a, b, m)).collect();
        PadicElement::reduced(&self.ctx, c, self.prec.min(rhs.prec))
    }
}

impl<'a> Mul<&'a PadicElement> for &'a PadicElement {
    type Output = PadicElement;
    fn mul(self, rhs: &PadicElement) -> PadicElement {
        self.check_same(rhs);
        let c = self.ctx.mul_raw(&self.coeffs, &rhs.coeffs);
        PadicElement::reduced(&self.ctx, c, self.prec.min(rhs.prec))
    }
}

impl Neg for &PadicElement {
    type Output = PadicElement;
    fn neg(self) -> PadicElement {
        let m = self.ctx.modulus_int();
        let c = self.coeffs.iter().map(|&a| neg_mod(a, m)).collect();
        PadicElement::reduced(&self.ctx, c, self.prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<PadicElement> for PadicElement {
            type Output = PadicElement;
            fn $method(self, rhs: PadicElement) -> PadicElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a PadicElement> for PadicElement {
            type Output = PadicElement;
            fn $method(self, rhs: &'a PadicElement) -> PadicElement {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PadicElement {
    type Output = PadicElement;
    fn neg(self) -> PadicElement {
        -(&self)
    }
}

/// Convenience for building `1` in a given ring from outside the module.
pub fn one_like(x: &PadicElement) -> PadicElement {
    PadicElement::from_coeffs(x.context(), monomial(0, x.context().degree()), x.precision())
}
