//! Cyclotomic numbers `eps_M = N_{Q(zeta_m)/M}(1 - zeta_m)` and their images
//! under a fixed embedding into an unramified extension of `Q_p`.

use std::sync::Arc;

use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::fields::{self, AbelianFieldSpec};
use crate::padic::arith::{self, gcd_u64};
use crate::padic::{make_context, PadicContext, PadicElement};

pub const DEFAULT_DEGREE_CAP: usize = 24;

/// The embedding `zeta_m -> g^(e (p^d - 1) / m)` where `g` is the context's
/// Teichmuller generator and `e` the embedding exponent.
#[derive(Clone, Debug)]
pub struct EmbeddingChoice {
    ctx: Arc<PadicContext>,
    exponent: u64,
    degree_cap: usize,
}

impl EmbeddingChoice {
    pub fn new(ctx: Arc<PadicContext>, exponent: u64) -> Self {
        EmbeddingChoice { ctx, exponent, degree_cap: DEFAULT_DEGREE_CAP }
    }

    /// Smallest context in which `zeta_m` exists.
    pub fn for_modulus(p: u64, m: u64, precision: u32, exponent: u64, cap: usize) -> Result<Self> {
        let d = residue_degree(p, m)?;
        if d > cap {
            return Err(Error::DegreeCapExceeded { m, needed: d, cap });
        }
        Ok(EmbeddingChoice { ctx: make_context(p, d, precision)?, exponent, degree_cap: cap })
    }

    pub fn with_degree_cap(mut self, cap: usize) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn degree(&self) -> usize {
        self.ctx.degree()
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn covers(&self, m: u64) -> bool {
        self.ctx.unit_order() % m as u128 == 0
    }

    /// The same exponent on the smallest context containing both the current
    /// residue field and `zeta_m`.
    pub fn widened(&self, m: u64) -> Result<Self> {
        if self.covers(m) {
            return Ok(self.clone());
        }
        let need = residue_degree(self.p(), m)?;
        let d = num_integer::lcm(need, self.degree());
        if d > self.degree_cap {
            return Err(Error::DegreeCapExceeded { m, needed: d, cap: self.degree_cap });
        }
        Ok(EmbeddingChoice {
            ctx: make_context(self.p(), d, self.ctx.precision())?,
            exponent: self.exponent,
            degree_cap: self.degree_cap,
        })
    }

    pub fn describe(&self) -> String {
        format!(
            "zeta_m -> g^({}*({}^{}-1)/m), g = Teichmuller generator of the residue field F_{}^{}",
            self.exponent,
            self.p(),
            self.degree(),
            self.p(),
            self.degree()
        )
    }
}

/// Residue degree `ord_m(p)` of `Q_p(zeta_m)`.
pub fn residue_degree(p: u64, m: u64) -> Result<usize> {
    if m == 0 || gcd_u64(p, m) != 1 {
        return Err(Error::Ramified { ell: p, m });
    }
    Ok(arith::multiplicative_order(p % m.max(1), m.max(1)) as usize)
}

/// Image of a primitive `m`-th root of unity, `m` prime to `p`.
pub fn embed_zeta(m: u64, emb: &EmbeddingChoice) -> Result<PadicElement> {
    let ctx = emb.context();
    if m == 0 || gcd_u64(m, emb.p()) != 1 {
        return Err(Error::Ramified { ell: emb.p(), m });
    }
    if !emb.covers(m) {
        let min_degree = residue_degree(emb.p(), m)?;
        return Err(Error::ContextTooSmall { m, have: emb.degree(), min_degree });
    }
    if gcd_u64(emb.exponent % m, m) != 1 && m > 1 {
        return Err(Error::Mismatch(format!(
            "embedding exponent {} is not prime to {m}",
            emb.exponent
        )));
    }
    let step = ctx.unit_order() / m as u128;
    let exp = (emb.exponent as u128 % m as u128) * step;
    Ok(PadicElement::teich_gen(ctx).pow(exp))
}

/// `zeta^k` for `k = 0..m`.
fn power_table(z: &PadicElement, m: u64) -> Vec<PadicElement> {
    let mut out = Vec::with_capacity(m as usize);
    let mut acc = PadicElement::one(z.context());
    for _ in 0..m {
        out.push(acc.clone());
        acc = &acc * z;
    }
    out
}

fn check_not_q(m_field: &AbelianFieldSpec) -> Result<()> {
    if m_field.is_rationals() {
        return Err(Error::InvalidField("eps_M is not defined for M = Q".into()));
    }
    Ok(())
}

/// `iota(eps_M^g) = prod_{a in gH_M} (1 - zeta_m^a)`. The context is widened
/// when `zeta_m` is missing and the degree cap allows it, so the result may
/// live in a larger ring than `emb`'s.
pub fn epsilon_m(m_field: &AbelianFieldSpec, g: usize, emb: &EmbeddingChoice) -> Result<PadicElement> {
    check_not_q(m_field)?;
    let m = m_field.conductor();
    let emb = emb.widened(m)?;
    let z = embed_zeta(m, &emb)?;
    let pw = power_table(&z, m);
    Ok(coset_product(m_field, g, &pw))
}

fn coset_product(m_field: &AbelianFieldSpec, g: usize, pw: &[PadicElement]) -> PadicElement {
    let one = PadicElement::one(pw[0].context());
    m_field
        .coset(g)
        .into_iter()
        .fold(one.clone(), |acc, a| &acc * &(&one - &pw[a as usize]))
}

/// All conjugates `iota(eps_M^g)`, indexed by `G_M`.
pub fn epsilon_conjugates(m_field: &AbelianFieldSpec, emb: &EmbeddingChoice) -> Result<Vec<PadicElement>> {
    check_not_q(m_field)?;
    let m = m_field.conductor();
    let emb = emb.widened(m)?;
    let z = embed_zeta(m, &emb)?;
    let pw = power_table(&z, m);
    Ok((0..m_field.degree()).map(|g| coset_product(m_field, g, &pw)).collect())
}

/// Result of comparing both sides of a distribution relation.
#[derive(Clone, Debug)]
pub struct DistributionOutcome {
    pub holds: bool,
    pub digits_agreeing: u32,
    pub digits_required: u32,
    pub lhs: PadicElement,
    pub rhs: PadicElement,
}

/// Checks `N_{Q(zeta_{m l})/Q(zeta_m)}(1 - zeta_{m l})` against `1 - zeta_m`
/// (`l | m`) or `(1 - zeta_m)^{1 - Frob_l^{-1}}` (`l` prime to `m`). For
/// `m = 1` both sides are `l`. Agreement is required to `required` digits.
pub fn distribution_check(m: u64, ell: u64, emb: &EmbeddingChoice, required: u32) -> Result<DistributionOutcome> {
    if !arith::is_prime_u64(ell) {
        return Err(Error::InvalidField(format!("{ell} is not prime")));
    }
    let p = emb.p();
    if gcd_u64(m * ell, p) != 1 {
        return Err(Error::Ramified { ell: p, m: m * ell });
    }
    let big = m * ell;
    let emb = emb.widened(big)?;
    let ctx = emb.context().clone();
    let z = embed_zeta(big, &emb)?;
    let pw = power_table(&z, big);
    let one = PadicElement::one(&ctx);
    let mut lhs = one.clone();
    for b in (1..big).filter(|&b| b % m == 1 % m && gcd_u64(b, big) == 1) {
        lhs = &lhs * &(&one - &pw[b as usize]);
    }
    let rhs = if m == 1 {
        PadicElement::from_int(&ctx, ell as i128)
    } else {
        // zeta_m is zeta_{m l}^l under the coherent embedding
        let zm = |k: u64| &one - &pw[((k % m) * ell) as usize];
        if m % ell == 0 {
            zm(1)
        } else {
            let inv = modinv(ell % m, m).expect("ell prime to m");
            &zm(1) * &zm(inv).inverse()?
        }
    };
    let prec = lhs.precision().min(rhs.precision());
    if prec < required {
        return Err(Error::InsufficientPrecision(format!(
            "distribution check needs {required} digits, only {prec} available"
        )));
    }
    let digits = lhs.agreement(&rhs);
    Ok(DistributionOutcome {
        holds: digits >= required,
        digits_agreeing: digits,
        digits_required: required,
        lhs,
        rhs,
    })
}

pub(crate) fn modinv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, a as i128 % m as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

/// How `sqrt(D)` was fixed for the quadratic period route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqrtSource {
    /// The embedded Gauss sum `sum_a chi(a) zeta_D^a`.
    GaussSum,
    /// The root whose residue lies in `[1, (p-1)/2]`, twisted by `chi(e)`.
    Convention,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteChoice {
    /// Cyclotomic context when its degree is within the cap, otherwise
    /// quadratic periods for quadratic fields.
    Auto,
    Cyclotomic,
    QuadraticPeriods,
}

#[derive(Clone, Debug)]
enum Route {
    Cyclotomic(EmbeddingChoice),
    Quadratic { sqrt_disc: u128, source: SqrtSource, gauss_ctx: Option<EmbeddingChoice> },
}

/// The fixed place `w | p` of a field `F` in which `p` splits totally: all
/// cyclotomic numbers of subfields of `F` are returned as elements of `Z_p`
/// under one coherent embedding.
#[derive(Clone, Debug)]
pub struct Place {
    field: AbelianFieldSpec,
    p: u64,
    precision: u32,
    exponent: u64,
    zp: Arc<PadicContext>,
    route: Route,
    gauss_sqrt: Arc<OnceCell<(u128, u32)>>,
}

impl Place {
    pub fn new(field: &AbelianFieldSpec, p: u64, precision: u32, exponent: u64, cap: usize) -> Result<Self> {
        Self::with_route(field, p, precision, exponent, cap, RouteChoice::Auto)
    }

    pub fn with_route(
        field: &AbelianFieldSpec,
        p: u64,
        precision: u32,
        exponent: u64,
        cap: usize,
        choice: RouteChoice,
    ) -> Result<Self> {
        if p == 2 || !arith::is_prime_u64(p) {
            return Err(Error::InvalidPrime(p));
        }
        fields::require_split(p, field)?;
        let f = field.conductor();
        if f > 1 && gcd_u64(exponent, f) != 1 {
            return Err(Error::Mismatch(format!("embedding exponent {exponent} is not prime to {f}")));
        }
        let zp = make_context(p, 1, precision)?;
        let degree = cyclotomic_degree(field, p)?;
        let quadratic = field.degree() == 2;
        let use_cyclo = match choice {
            RouteChoice::Cyclotomic => true,
            RouteChoice::QuadraticPeriods => false,
            RouteChoice::Auto => degree <= cap || !quadratic,
        };
        let route = if use_cyclo {
            if degree > cap {
                return Err(Error::DegreeCapExceeded { m: f, needed: degree, cap });
            }
            let ctx = make_context(p, degree, precision)?;
            Route::Cyclotomic(EmbeddingChoice { ctx, exponent, degree_cap: cap })
        } else {
            if !quadratic {
                return Err(Error::InvalidField(
                    "the period route is implemented for quadratic fields only".into(),
                ));
            }
            let disc = f as i64;
            if degree <= cap {
                let ctx = make_context(p, degree, precision)?;
                let emb = EmbeddingChoice { ctx, exponent, degree_cap: cap };
                let s = gauss_sum(disc, &emb)?.rational_value()?;
                Route::Quadratic { sqrt_disc: s, source: SqrtSource::GaussSum, gauss_ctx: Some(emb) }
            } else {
                let modulus = arith::checked_prime_power(p, precision)
                    .ok_or(Error::ModulusTooWide { p, d: 1, n: precision })?;
                let s0 = sqrt_mod_prime_power(f as u128, p, precision)?;
                let s = if fields::kronecker(disc, exponent) == 1 { s0 } else { arith::neg_mod(s0, modulus) };
                Route::Quadratic { sqrt_disc: s, source: SqrtSource::Convention, gauss_ctx: None }
            }
        };
        Ok(Place { field: field.clone(), p, precision, exponent, zp, route, gauss_sqrt: Arc::default() })
    }

    pub fn field(&self) -> &AbelianFieldSpec {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn zp_context(&self) -> &Arc<PadicContext> {
        &self.zp
    }

    /// The cyclotomic embedding, when that route is active or when it was
    /// used to fix the square root of the discriminant.
    pub fn embedding(&self) -> Option<&EmbeddingChoice> {
        match &self.route {
            Route::Cyclotomic(e) => Some(e),
            Route::Quadratic { gauss_ctx, .. } => gauss_ctx.as_ref(),
        }
    }

    pub fn is_cyclotomic(&self) -> bool {
        matches!(self.route, Route::Cyclotomic(_))
    }

    /// `iota(sqrt(D))` for the period route.
    pub fn sqrt_disc(&self) -> Option<(PadicElement, SqrtSource)> {
        match &self.route {
            Route::Quadratic { sqrt_disc, source, .. } => {
                Some((PadicElement::from_zp(&self.zp, *sqrt_disc, self.precision), *source))
            }
            Route::Cyclotomic(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.route {
            Route::Cyclotomic(e) => e.describe(),
            Route::Quadratic { source, .. } => match source {
                SqrtSource::GaussSum => format!(
                    "quadratic periods, sqrt(D) = embedded Gauss sum, exponent {}",
                    self.exponent
                ),
                SqrtSource::Convention => format!(
                    "quadratic periods, sqrt(D) = chi({})*s0 with s0 mod p in [1,(p-1)/2]",
                    self.exponent
                ),
            },
        }
    }

    /// `iota(sqrt(D))` in `Z_p` for a quadratic field, where `sqrt(D)` is the
    /// Gauss sum of the quadratic character.
    pub fn quadratic_sqrt(&self) -> Result<PadicElement> {
        if self.field.degree() != 2 {
            return Err(Error::InvalidField("expected a quadratic field".into()));
        }
        match &self.route {
            Route::Cyclotomic(emb) => {
                let &(s, prec) = self.gauss_sqrt.get_or_try_init(|| -> Result<(u128, u32)> {
                    let s = gauss_sum(self.field.conductor() as i64, emb)?;
                    Ok((s.rational_value()?, s.precision()))
                })?;
                Ok(PadicElement::from_zp(&self.zp, s, prec))
            }
            Route::Quadratic { sqrt_disc, .. } => Ok(PadicElement::from_zp(&self.zp, *sqrt_disc, self.precision)),
        }
    }

    /// `iota(eps_M^g)` in `Z_p` for every `g` in `G_M`, for a subfield
    /// `Q != M <= F`.
    pub fn epsilon_conjugates(&self, m_field: &AbelianFieldSpec) -> Result<Vec<PadicElement>> {
        check_not_q(m_field)?;
        if !m_field.is_subfield_of(&self.field) {
            return Err(Error::NotSubfield { sub: m_field.conductor(), sup: self.field.conductor() });
        }
        match &self.route {
            Route::Cyclotomic(emb) => {
                let values = epsilon_conjugates(m_field, emb)?;
                values
                    .iter()
                    .map(|x| {
                        let v = x.rational_value()?;
                        Ok(PadicElement::from_zp(&self.zp, v, x.precision()))
                    })
                    .collect()
            }
            Route::Quadratic { sqrt_disc, .. } => {
                // the only subfield other than Q is F itself
                let (u, v) = quadratic_epsilon_coordinates(m_field, self.p, self.precision)?;
                let m = self.zp.modulus_int();
                let vs = arith::mul_mod(v, *sqrt_disc, m);
                let plus = PadicElement::from_zp(&self.zp, arith::add_mod(u, vs, m), self.precision);
                let minus = PadicElement::from_zp(&self.zp, arith::sub_mod(u, vs, m), self.precision);
                Ok(vec![plus, minus])
            }
        }
    }

    pub fn epsilon(&self, m_field: &AbelianFieldSpec, g: usize) -> Result<PadicElement> {
        Ok(self.epsilon_conjugates(m_field)?.swap_remove(g))
    }
}

/// Degree of the residue field needed for `zeta_f` and for the values of
/// every character of `F`.
pub fn cyclotomic_degree(field: &AbelianFieldSpec, p: u64) -> Result<usize> {
    let d_f = residue_degree(p, field.conductor())?;
    let d_e = residue_degree(p, field.exponent())?;
    Ok(num_integer::lcm(d_f, d_e))
}

/// Embedded Gauss sum `sum_a (D/a) zeta_D^a` of the quadratic character of
/// conductor `D`.
pub fn gauss_sum(disc: i64, emb: &EmbeddingChoice) -> Result<PadicElement> {
    let f = disc.unsigned_abs();
    let z = embed_zeta(f, emb)?;
    let pw = power_table(&z, f);
    let mut acc = PadicElement::zero(emb.context());
    for a in 1..f {
        match fields::kronecker(disc, a) {
            1 => acc = &acc + &pw[a as usize],
            -1 => acc = &acc - &pw[a as usize],
            _ => {}
        }
    }
    Ok(acc)
}

/// Coordinates `(u, v)` modulo `p^precision` with `eps_F = u + v sqrt(D)` for
/// a real quadratic field, where `sqrt(D)` denotes the Gauss sum. The
/// product `prod_{a in H} (1 - x^a)` is expanded in `Z/p^K[x]/(x^f - 1)`
/// and `u`, `v` are read off through traces to `Q`.
pub fn quadratic_epsilon_coordinates(field: &AbelianFieldSpec, p: u64, precision: u32) -> Result<(u128, u128)> {
    if field.degree() != 2 {
        return Err(Error::InvalidField("expected a quadratic field".into()));
    }
    let f = field.conductor();
    let phi = arith::euler_phi(f);
    let extra = arith::val_u128(phi as u128, p);
    let big = precision + extra;
    let m = arith::checked_prime_power(p, big).ok_or(Error::ModulusTooWide { p, d: 1, n: big })?;
    let fu = f as usize;
    let mut poly = vec![0u128; fu];
    poly[0] = 1;
    let mut next = vec![0u128; fu];
    for &a in field.subgroup() {
        let a = a as usize;
        for c in 0..fu {
            let shifted = poly[(c + fu - a) % fu];
            next[c] = arith::sub_mod(poly[c], shifted, m);
        }
        std::mem::swap(&mut poly, &mut next);
    }
    let disc = f as i64;
    let mut u_acc = 0u128;
    let mut v_acc = 0u128;
    for (c, &coef) in poly.iter().enumerate() {
        if coef == 0 {
            continue;
        }
        let rs = ramanujan_sum(c as u64, f);
        u_acc = arith::add_mod(u_acc, arith::mul_mod(coef, arith::from_i128(rs as i128, m), m), m);
        match fields::kronecker(disc, c as u64) {
            1 => v_acc = arith::add_mod(v_acc, coef, m),
            -1 => v_acc = arith::sub_mod(v_acc, coef, m),
            _ => {}
        }
    }
    let divide = |x: u128| -> Result<u128> {
        let pe = (p as u128).pow(extra);
        if x % pe != 0 {
            return Err(Error::SelfCheck("trace is not divisible by phi(f)".into()));
        }
        let unit = (phi as u128) / pe;
        let small = arith::checked_prime_power(p, precision).expect("fits");
        let inv = arith::inv_mod_prime_power(unit % small, p, small).expect("unit");
        Ok(arith::mul_mod((x / pe) % small, inv, small))
    };
    Ok((divide(u_acc)?, divide(v_acc)?))
}

/// `sum_{gcd(a, f) = 1} zeta_f^{a c}`.
pub fn ramanujan_sum(c: u64, f: u64) -> i64 {
    let g = gcd_u64(c % f, f);
    let q = f / g;
    arith::mobius(q) * (arith::euler_phi(f) / arith::euler_phi(q)) as i64
}

/// A square root of `a` in `Z/p^k` (`a` a unit square mod `p`), taken with
/// residue in `[1, (p-1)/2]`.
pub fn sqrt_mod_prime_power(a: u128, p: u64, k: u32) -> Result<u128> {
    let r = sqrt_mod_prime(a % p as u128, p)
        .ok_or_else(|| Error::Mismatch(format!("{a} is not a square mod {p}")))?;
    let r = if r > (p as u128) / 2 { p as u128 - r } else { r };
    let m = arith::checked_prime_power(p, k).ok_or(Error::ModulusTooWide { p, d: 1, n: k })?;
    let a = a % m;
    let mut s = r;
    for _ in 0..=k {
        let f = arith::sub_mod(arith::mul_mod(s, s, m), a, m);
        if f == 0 {
            break;
        }
        let inv = arith::inv_mod_prime_power(arith::add_mod(s, s, m), p, m).expect("unit");
        s = arith::sub_mod(s, arith::mul_mod(f, inv, m), m);
    }
    Ok(s)
}

fn sqrt_mod_prime(a: u128, p: u64) -> Option<u128> {
    let p128 = p as u128;
    if a == 0 {
        return None;
    }
    if arith::pow_mod(a, (p128 - 1) / 2, p128) != 1 {
        return None;
    }
    // Tonelli-Shanks
    let mut q = p128 - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u128;
    while arith::pow_mod(z, (p128 - 1) / 2, p128) != p128 - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = arith::pow_mod(z, q, p128);
    let mut t = arith::pow_mod(a, q, p128);
    let mut r = arith::pow_mod(a, (q + 1) / 2, p128);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = t2 * t2 % p128;
            i += 1;
        }
        let b = arith::pow_mod(c, 1 << (m - i - 1), p128);
        m = i;
        c = b * b % p128;
        t = t * c % p128;
        r = r * b % p128;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_orders() {
        let emb = EmbeddingChoice::for_modulus(7, 8, 8, 1, 24).unwrap();
        assert_eq!(emb.degree(), 2);
        assert!(embed_zeta(1, &emb).unwrap().agrees_with(&PadicElement::one(emb.context()), 8));
        let minus = PadicElement::from_int(emb.context(), -1);
        assert!(embed_zeta(2, &emb).unwrap().agrees_with(&minus, 8));
        let z8 = embed_zeta(8, &emb).unwrap();
        assert!(z8.agrees_with(&PadicElement::teich_gen(emb.context()).pow(6), 8));
        let one = PadicElement::one(emb.context());
        for k in 1..8u128 {
            assert!(!z8.pow(k).agrees_with(&one, 1));
        }
        assert!(z8.pow(8).agrees_with(&one, 8));
        // coherence
        let z4 = embed_zeta(4, &emb).unwrap();
        assert!(z8.pow(2).agrees_with(&z4, 8));
        assert!(matches!(embed_zeta(5, &emb), Err(Error::ContextTooSmall { min_degree: 4, .. })));
    }

    #[test]
    fn prime_conductor_full_norm() {
        // Q(zeta_5)^+ has conductor 5; product over both cosets is 5
        let m = AbelianFieldSpec::new(5, &[4]).unwrap();
        let emb = EmbeddingChoice::for_modulus(11, 5, 10, 1, 24).unwrap();
        let conj = epsilon_conjugates(&m, &emb).unwrap();
        let prod = &conj[0] * &conj[1];
        assert!(prod.agrees_with(&PadicElement::from_int(emb.context(), 5), 10));
    }

    #[test]
    fn sqrt2_epsilon_is_two_minus_root_two() {
        let m = AbelianFieldSpec::new(8, &[7]).unwrap();
        let emb = EmbeddingChoice::for_modulus(7, 8, 10, 1, 24).unwrap();
        let e = epsilon_m(&m, 0, &emb).unwrap();
        let z = embed_zeta(8, &emb).unwrap();
        let root2 = &z + &z.pow(7);
        let two = PadicElement::from_int(emb.context(), 2);
        assert!(e.agrees_with(&(&two - &root2), 10));
        let e_sigma = epsilon_m(&m, 1, &emb).unwrap();
        assert!((&e * &e_sigma).agrees_with(&two, 10));
        assert!(e.frobenius().agrees_with(&e, 10));
    }

    #[test]
    fn distribution_small_cases() {
        let emb = EmbeddingChoice::for_modulus(7, 1, 10, 1, 24).unwrap();
        for ell in [2, 3, 5] {
            let out = distribution_check(1, ell, &emb, 8).unwrap();
            assert!(out.holds);
        }
        let out = distribution_check(8, 3, &emb, 8).unwrap();
        assert!(out.holds, "{out:?}");
        let out = distribution_check(9, 3, &emb, 8).unwrap();
        assert!(out.holds);
    }

    #[test]
    fn period_route_matches_cyclotomic_route() {
        for (disc, p) in [(8i64, 7u64), (5, 11), (13, 3), (12, 11), (21, 5), (29, 5)] {
            let f = AbelianFieldSpec::real_quadratic(disc).unwrap();
            let a = Place::with_route(&f, p, 12, 1, 24, RouteChoice::Cyclotomic).unwrap();
            let b = Place::with_route(&f, p, 12, 1, 24, RouteChoice::QuadraticPeriods).unwrap();
            let ea = a.epsilon_conjugates(&f).unwrap();
            let eb = b.epsilon_conjugates(&f).unwrap();
            for (x, y) in ea.iter().zip(&eb) {
                assert!(x.agrees_with(y, 12), "D={disc} p={p}: {x:?} vs {y:?}");
            }
        }
    }

    #[test]
    fn sqrt_and_ramanujan() {
        let s = sqrt_mod_prime_power(2, 7, 10).unwrap();
        let m = 7u128.pow(10);
        assert_eq!(arith::mul_mod(s, s, m), 2);
        assert!(s % 7 <= 3);
        // c_f(c) summed over c is 0 for f > 1, and c_f(0) = phi(f)
        for f in [5u64, 8, 12, 15] {
            let total: i64 = (0..f).map(|c| ramanujan_sum(c, f)).sum();
            assert_eq!(total, 0);
            assert_eq!(ramanujan_sum(0, f), arith::euler_phi(f) as i64);
            assert_eq!(ramanujan_sum(1, f), arith::mobius(f));
        }
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(modinv(3, 8), Some(3));
        assert_eq!(modinv(2, 8), None);
    }
}
