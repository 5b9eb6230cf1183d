//! The group ring `Z/p^N[G]` of a Galois group `G = Gal(F/Q)`, its ideals as
//! finite `Z/p^N`-modules, and their indices.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{AbelianFieldSpec, CharacterSpec};
use crate::padic::arith::{self, add_mod, mul_mod, sub_mod};
use crate::padic::{PadicContext, PadicElement};

#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    field: Arc<AbelianFieldSpec>,
    p: u64,
    prec: u32,
    coeffs: Vec<u128>,
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement(f={}, p={}, N={}, {:?})", self.field.conductor(), self.p, self.prec, self.coeffs)
    }
}

fn modulus(p: u64, prec: u32) -> Result<u128> {
    arith::checked_prime_power(p, prec).ok_or(Error::ModulusTooWide { p, d: 1, n: prec })
}

impl GroupRingElement {
    pub fn from_coeffs(field: &Arc<AbelianFieldSpec>, p: u64, prec: u32, coeffs: Vec<u128>) -> Result<Self> {
        if coeffs.len() != field.degree() {
            return Err(Error::Mismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                field.degree()
            )));
        }
        let m = modulus(p, prec)?;
        let coeffs = coeffs.into_iter().map(|c| c % m).collect();
        Ok(GroupRingElement { field: field.clone(), p, prec, coeffs })
    }

    pub fn from_signed(field: &Arc<AbelianFieldSpec>, p: u64, prec: u32, coeffs: &[i128]) -> Result<Self> {
        let m = modulus(p, prec)?;
        Self::from_coeffs(field, p, prec, coeffs.iter().map(|&c| arith::from_i128(c, m)).collect())
    }

    pub fn zero(field: &Arc<AbelianFieldSpec>, p: u64, prec: u32) -> Result<Self> {
        Self::from_coeffs(field, p, prec, vec![0; field.degree()])
    }

    /// The group element `g` itself.
    pub fn basis(field: &Arc<AbelianFieldSpec>, p: u64, prec: u32, g: usize) -> Result<Self> {
        let mut c = vec![0; field.degree()];
        c[g] = 1;
        Self::from_coeffs(field, p, prec, c)
    }

    pub fn one(field: &Arc<AbelianFieldSpec>, p: u64, prec: u32) -> Result<Self> {
        Self::basis(field, p, prec, 0)
    }

    /// `sum_{h in H} h` for a subgroup given by element indices.
    pub fn subgroup_sum(field: &Arc<AbelianFieldSpec>, p: u64, prec: u32, elements: &[usize]) -> Result<Self> {
        let mut c = vec![0; field.degree()];
        for &h in elements {
            c[h] += 1;
        }
        Self::from_coeffs(field, p, prec, c)
    }

    /// `Tr_{F/M} = sum over ker(G_F -> G_M)`.
    pub fn relative_trace(field: &Arc<AbelianFieldSpec>, sub: &AbelianFieldSpec, p: u64, prec: u32) -> Result<Self> {
        let kernel = field.relative_group(sub)?;
        Self::subgroup_sum(field, p, prec, &kernel)
    }

    pub fn field(&self) -> &Arc<AbelianFieldSpec> {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> u128 {
        self.coeffs[g]
    }

    fn modulus(&self) -> u128 {
        (self.p as u128).pow(self.prec)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p || *self.field != *other.field {
            return Err(Error::Mismatch("group ring elements over different groups or primes".into()));
        }
        Ok(())
    }

    /// Precision of a binary operation: the smaller of the two.
    fn joint(&self, other: &Self) -> Result<(u32, u128)> {
        self.check_compatible(other)?;
        let prec = self.prec.min(other.prec);
        Ok((prec, (self.p as u128).pow(prec)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (prec, m) = self.joint(other)?;
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| add_mod(a % m, b % m, m)).collect();
        Ok(GroupRingElement { field: self.field.clone(), p: self.p, prec, coeffs: c })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let (prec, m) = self.joint(other)?;
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| sub_mod(a % m, b % m, m)).collect();
        Ok(GroupRingElement { field: self.field.clone(), p: self.p, prec, coeffs: c })
    }

    pub fn scale(&self, k: i128) -> Self {
        let m = self.modulus();
        let k = arith::from_i128(k, m);
        let c = self.coeffs.iter().map(|&a| mul_mod(a, k, m)).collect();
        GroupRingElement { field: self.field.clone(), p: self.p, prec: self.prec, coeffs: c }
    }

    pub fn scale_residue(&self, k: u128) -> Self {
        let m = self.modulus();
        let c = self.coeffs.iter().map(|&a| mul_mod(a, k % m, m)).collect();
        GroupRingElement { field: self.field.clone(), p: self.p, prec: self.prec, coeffs: c }
    }

    /// `g * self`.
    pub fn translate(&self, g: usize) -> Self {
        let mut c = vec![0; self.coeffs.len()];
        for (h, &a) in self.coeffs.iter().enumerate() {
            c[self.field.mul(g, h)] = a;
        }
        GroupRingElement { field: self.field.clone(), p: self.p, prec: self.prec, coeffs: c }
    }

    /// Image under the involution `g -> g^{-1}`.
    pub fn involution(&self) -> Self {
        let mut c = vec![0; self.coeffs.len()];
        for (h, &a) in self.coeffs.iter().enumerate() {
            c[self.field.inv(h)] = a;
        }
        GroupRingElement { field: self.field.clone(), p: self.p, prec: self.prec, coeffs: c }
    }

    pub fn augmentation(&self) -> u128 {
        let m = self.modulus();
        self.coeffs.iter().fold(0, |acc, &a| add_mod(acc, a, m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        let prec = prec.min(self.prec);
        let m = (self.p as u128).pow(prec);
        GroupRingElement {
            field: self.field.clone(),
            p: self.p,
            prec,
            coeffs: self.coeffs.iter().map(|&c| c % m).collect(),
        }
    }

    /// Minimum `p`-adic valuation of the coefficients (`prec` if zero).
    pub fn content_valuation(&self) -> u32 {
        self.coeffs.iter().map(|&c| arith::val_mod(c, self.p, self.prec)).min().unwrap_or(self.prec)
    }
}

/// Convolution product in `Z/p^N[G]`.
pub fn gr_multiply(a: &GroupRingElement, b: &GroupRingElement) -> Result<GroupRingElement> {
    let (prec, m) = a.joint(b)?;
    let n = a.coeffs.len();
    let mut c = vec![0u128; n];
    for (g, &x) in a.coeffs.iter().enumerate() {
        if x % m == 0 {
            continue;
        }
        for (h, &y) in b.coeffs.iter().enumerate() {
            if y % m == 0 {
                continue;
            }
            let k = a.field.mul(g, h);
            c[k] = add_mod(c[k], mul_mod(x % m, y % m, m), m);
        }
    }
    Ok(GroupRingElement { field: a.field.clone(), p: a.p, prec, coeffs: c })
}

/// Image of `zeta_E` in `ctx`, where `E` is the character's value order.
pub fn character_root(chi: &CharacterSpec, ctx: &Arc<PadicContext>) -> Result<PadicElement> {
    let e = chi.value_order as u128;
    if ctx.unit_order() % e != 0 {
        return Err(Error::ContextTooSmall {
            m: chi.value_order,
            have: ctx.degree(),
            min_degree: arith::multiplicative_order(ctx.p() % chi.value_order.max(1), chi.value_order.max(1)) as usize,
        });
    }
    Ok(PadicElement::teich_gen(ctx).pow(ctx.unit_order() / e))
}

/// `chi(theta) = sum_g a_g chi(g)`, with `zeta_E` sent to
/// `g^((p^d - 1) / E)` in `ctx`.
pub fn evaluate_character(theta: &GroupRingElement, chi: &CharacterSpec, ctx: &Arc<PadicContext>) -> Result<PadicElement> {
    if chi.order % theta.p == 0 {
        return Err(Error::UnsupportedCharacter(format!(
            "order {} is divisible by p = {}",
            chi.order, theta.p
        )));
    }
    if chi.field != **theta.field() {
        return Err(Error::Mismatch("character of a different group".into()));
    }
    if ctx.p() != theta.p {
        return Err(Error::Mismatch("context for a different prime".into()));
    }
    let root = character_root(chi, ctx)?;
    let powers: Vec<PadicElement> = {
        let mut v = Vec::with_capacity(chi.value_order as usize);
        let mut acc = PadicElement::one(ctx);
        for _ in 0..chi.value_order {
            v.push(acc.clone());
            acc = &acc * &root;
        }
        v
    };
    let prec = theta.prec.min(ctx.precision());
    let mut acc = PadicElement::zero(ctx).with_precision(prec);
    for (g, &a) in theta.coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let term = PadicElement::from_zp(ctx, a, prec);
        acc = &acc + &(&term * &powers[chi.exponents[g] as usize]);
    }
    Ok(acc.with_precision(prec))
}

/// An ideal of `Z/p^N[G]`, stored as the Howell form of the `Z/p^N`-span
/// of all translates of its generators.
#[derive(Clone, Debug)]
pub struct GroupRingIdeal {
    field: Arc<AbelianFieldSpec>,
    p: u64,
    prec: u32,
    generators: Vec<GroupRingElement>,
    basis: Vec<Vec<u128>>,
}

impl GroupRingIdeal {
    pub fn generators(&self) -> &[GroupRingElement] {
        &self.generators
    }

    /// Canonical basis rows.
    pub fn basis(&self) -> &[Vec<u128>] {
        &self.basis
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> &Arc<AbelianFieldSpec> {
        &self.field
    }

    /// Whether `x` lies in the ideal (at the ideal's precision).
    pub fn contains(&self, x: &GroupRingElement) -> bool {
        let m = (self.p as u128).pow(self.prec);
        let mut rows = self.basis.clone();
        rows.push(x.coeffs.iter().map(|&c| c % m).collect());
        howell_form(&mut rows, self.p, self.prec);
        rows == self.basis
    }

    pub fn contains_ideal(&self, other: &GroupRingIdeal) -> bool {
        other.basis.iter().all(|row| {
            let m = (self.p as u128).pow(self.prec);
            let mut rows = self.basis.clone();
            rows.push(row.iter().map(|&c| c % m).collect());
            howell_form(&mut rows, self.p, self.prec);
            rows == self.basis
        })
    }

    /// `p`-adic valuations of the elementary divisors of the inclusion into
    /// `(Z/p^N)^n`; missing divisors are reported as `N`.
    pub fn elementary_divisors(&self) -> Vec<u32> {
        let n = self.field.degree();
        let mut rows = self.basis.clone();
        let mut divs = smith_valuations(&mut rows, self.p, self.prec);
        while divs.len() < n {
            divs.push(self.prec);
        }
        divs
    }

    pub fn index_valuation(&self, guard: u32) -> IndexValuation {
        ideal_index_valuation(self, guard)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexValuation {
    Finite(u32),
    /// Some elementary divisor reached `p^(N - guard)`.
    Unresolved { largest_divisor: u32, precision: u32 },
}

impl IndexValuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            IndexValuation::Finite(v) => Some(v),
            IndexValuation::Unresolved { .. } => None,
        }
    }
}

/// Ideal generated by `gens`: the `Z/p^N`-span of `{g x}`, put in Howell form.
pub fn ideal_basis(gens: &[GroupRingElement]) -> Result<GroupRingIdeal> {
    let first = gens.first().ok_or(Error::ZeroInput("ideal with no generators"))?;
    let prec = gens.iter().map(|x| x.prec).min().unwrap();
    for x in gens {
        first.check_compatible(x)?;
    }
    let field = first.field.clone();
    let p = first.p;
    let m = (p as u128).pow(prec);
    let mut rows = Vec::new();
    for x in gens {
        for g in 0..field.degree() {
            rows.push(x.translate(g).coeffs.iter().map(|&c| c % m).collect());
        }
    }
    howell_form(&mut rows, p, prec);
    let generators = gens.iter().map(|x| x.with_precision(prec)).collect();
    Ok(GroupRingIdeal { field, p, prec, generators, basis: rows })
}

/// `v_p` of `(Z/p^N[G] : I)` from the elementary divisors, or unresolved
/// when one of them is at least `p^(N - guard)`.
pub fn ideal_index_valuation(ideal: &GroupRingIdeal, guard: u32) -> IndexValuation {
    let divs = ideal.elementary_divisors();
    let limit = ideal.prec.saturating_sub(guard);
    let largest = divs.iter().copied().max().unwrap_or(0);
    if largest >= limit {
        IndexValuation::Unresolved { largest_divisor: largest, precision: ideal.prec }
    } else {
        IndexValuation::Finite(divs.iter().sum())
    }
}

fn unit_part_inverse(x: u128, p: u64, v: u32, m: u128) -> u128 {
    let pv = (p as u128).pow(v);
    arith::inv_mod_prime_power((x / pv) % m, p, m).expect("unit part is invertible")
}

/// In-place Howell form over `Z/p^N`: pivots are powers of `p` in strictly
/// increasing columns, entries above a pivot are reduced below it, and the
/// rows span the same module with the Howell property.
pub fn howell_form(rows: &mut Vec<Vec<u128>>, p: u64, prec: u32) {
    let m = (p as u128).pow(prec);
    let ncols = rows.first().map_or(0, |r| r.len());
    rows.retain(|r| r.iter().any(|&c| c % m != 0));
    let mut pivots: Vec<(usize, u32)> = Vec::new();
    let mut r = 0;
    for j in 0..ncols {
        let best = (r..rows.len())
            .filter(|&i| rows[i][j] % m != 0)
            .min_by_key(|&i| arith::val_mod(rows[i][j], p, prec));
        let Some(bi) = best else { continue };
        rows.swap(r, bi);
        let v = arith::val_mod(rows[r][j], p, prec);
        let inv = unit_part_inverse(rows[r][j], p, v, m);
        for c in rows[r].iter_mut() {
            *c = mul_mod(*c, inv, m);
        }
        let pv = (p as u128).pow(v);
        for i in r + 1..rows.len() {
            let t = rows[i][j] / pv;
            if t != 0 {
                for k in j..ncols {
                    let sub = mul_mod(t, rows[r][k], m);
                    rows[i][k] = sub_mod(rows[i][k], sub, m);
                }
            }
        }
        if v > 0 {
            let scale = (p as u128).pow(prec - v);
            let extra: Vec<u128> = rows[r].iter().map(|&c| mul_mod(c, scale, m)).collect();
            if extra.iter().any(|&c| c != 0) {
                rows.push(extra);
            }
        }
        pivots.push((j, v));
        r += 1;
        let mut i = r;
        while i < rows.len() {
            if rows[i].iter().all(|&c| c == 0) {
                rows.swap_remove(i);
            } else {
                i += 1;
            }
        }
    }
    rows.truncate(r);
    for k in 0..r {
        let (j, v) = pivots[k];
        let pv = (p as u128).pow(v);
        for i in 0..k {
            let q = rows[i][j] / pv;
            if q != 0 {
                for c in j..ncols {
                    let sub = mul_mod(q, rows[k][c], m);
                    rows[i][c] = sub_mod(rows[i][c], sub, m);
                }
            }
        }
    }
}

/// Valuations of the nonzero Smith invariants over `Z/p^N`. Destroys `rows`.
pub fn smith_valuations(rows: &mut [Vec<u128>], p: u64, prec: u32) -> Vec<u32> {
    let m = (p as u128).pow(prec);
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in rows.iter().enumerate().skip(t) {
            for (j, &c) in row.iter().enumerate().skip(t) {
                if c % m != 0 {
                    let v = arith::val_mod(c, p, prec);
                    if best.map_or(true, |b| v < b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        rows.swap(t, bi);
        for row in rows.iter_mut() {
            row.swap(t, bj);
        }
        let inv = unit_part_inverse(rows[t][t], p, v, m);
        for c in rows[t].iter_mut() {
            *c = mul_mod(*c, inv, m);
        }
        let pv = (p as u128).pow(v);
        for i in t + 1..nrows {
            let q = rows[i][t] / pv;
            if q != 0 {
                for k in t..ncols {
                    let sub = mul_mod(q, rows[t][k], m);
                    rows[i][k] = sub_mod(rows[i][k], sub, m);
                }
            }
        }
        // column operations only touch row t beyond the pivot
        for k in t + 1..ncols {
            rows[t][k] = 0;
        }
        out.push(v);
        t += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_group() -> Arc<AbelianFieldSpec> {
        Arc::new(AbelianFieldSpec::new(8, &[7]).unwrap())
    }

    #[test]
    fn ring_identities() {
        let g = z2_group();
        let a = GroupRingElement::from_signed(&g, 7, 8, &[3, -5]).unwrap();
        let one = GroupRingElement::one(&g, 7, 8).unwrap();
        assert_eq!(gr_multiply(&a, &one).unwrap(), a);
        let tr = GroupRingElement::subgroup_sum(&g, 7, 8, &[0, 1]).unwrap();
        assert_eq!(gr_multiply(&tr, &tr).unwrap(), tr.scale(2));
    }

    #[test]
    fn telescoping_in_cyclic_group() {
        let f = Arc::new(AbelianFieldSpec::new(17, &[16, 13]).unwrap());
        assert_eq!(f.degree(), 4);
        let gen = (0..4).find(|&g| f.order_of(g) == 4).unwrap();
        let p = 5;
        let one = GroupRingElement::one(&f, p, 6).unwrap();
        let g = GroupRingElement::basis(&f, p, 6, gen).unwrap();
        let one_minus_g = one.sub(&g).unwrap();
        let mut geo = GroupRingElement::zero(&f, p, 6).unwrap();
        let mut pw = one.clone();
        for _ in 0..3 {
            geo = geo.add(&pw).unwrap();
            pw = gr_multiply(&pw, &g).unwrap();
        }
        // (1 - g)(1 + g + g^2) = 1 - g^3
        let lhs = gr_multiply(&one_minus_g, &geo).unwrap();
        assert_eq!(lhs, one.sub(&pw).unwrap());
    }

    #[test]
    fn ideal_examples() {
        let g = z2_group();
        let p = 7;
        let n = 10;
        let one = GroupRingElement::one(&g, p, n).unwrap();
        let full = ideal_basis(&[one.clone()]).unwrap();
        assert_eq!(full.index_valuation(2), IndexValuation::Finite(0));

        let sigma = GroupRingElement::basis(&g, p, n, 1).unwrap();
        let a = one.sub(&sigma).unwrap();
        let b = one.add(&sigma).unwrap();
        assert_eq!(ideal_basis(&[a.clone(), b]).unwrap().index_valuation(2), IndexValuation::Finite(0));

        // <p^2, p(1 - sigma)>: Smith form of [[49, 0], [0, 49], [7, -7], [-7, 7]]
        let i = ideal_basis(&[one.scale(49), a.scale(7)]).unwrap();
        assert_eq!(i.index_valuation(2), IndexValuation::Finite(3));

        let pid = ideal_basis(&[one.scale(7)]).unwrap();
        assert_eq!(pid.index_valuation(2), IndexValuation::Finite(2));

        // a single (1 - sigma) has infinite index
        assert!(matches!(
            ideal_basis(&[a]).unwrap().index_valuation(2),
            IndexValuation::Unresolved { .. }
        ));
    }

    #[test]
    fn trivial_group_index_p() {
        let q = Arc::new(AbelianFieldSpec::rationals());
        let x = GroupRingElement::from_signed(&q, 5, 8, &[5]).unwrap();
        assert_eq!(ideal_basis(&[x]).unwrap().index_valuation(2), IndexValuation::Finite(1));
    }

    #[test]
    fn howell_is_presentation_independent() {
        let g = z2_group();
        let p = 3;
        let n = 6;
        let x = GroupRingElement::from_signed(&g, p, n, &[9, 3]).unwrap();
        let y = GroupRingElement::from_signed(&g, p, n, &[27, 0]).unwrap();
        let i1 = ideal_basis(&[x.clone(), y.clone()]).unwrap();
        let i2 = ideal_basis(&[y.scale(2), x.scale(4), x.add(&y).unwrap()]).unwrap();
        assert_eq!(i1.basis(), i2.basis());
        assert!(i1.contains(&x));
        assert!(!i1.contains(&GroupRingElement::one(&g, p, n).unwrap()));
    }

    #[test]
    fn quadratic_character_value() {
        let g = z2_group();
        let chars = crate::fields::characters(&g);
        let ctx = crate::padic::make_context(7, 1, 8).unwrap();
        let a = GroupRingElement::from_signed(&g, 7, 8, &[10, 3]).unwrap();
        let v = evaluate_character(&a, &chars[1], &ctx).unwrap();
        assert!(v.agrees_with(&PadicElement::from_int(&ctx, 7), 8));
        let t = evaluate_character(&a, &chars[0], &ctx).unwrap();
        assert!(t.agrees_with(&PadicElement::from_int(&ctx, 13), 8));
    }
}
