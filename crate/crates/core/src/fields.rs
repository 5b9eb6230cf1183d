//! Real abelian fields described by a conductor `f` and a subgroup
//! `H <= (Z/f)^*`, so that `Gal(F/Q) = (Z/f)^* / H`.
//!
//! Galois elements are indexed by their coset representative, the smallest
//! nonnegative integer in the coset; index 0 is always the identity.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::padic::arith::{self, gcd_u64};

/// Equality and hashing see only `(f, H)`, not the generators used to
/// present `H`.
#[derive(Clone)]
pub struct AbelianFieldSpec {
    conductor: u64,
    generators: Vec<u64>,
    subgroup: Vec<u64>,
    reps: Vec<u64>,
    coset_of: Vec<u32>,
}

const NOT_A_UNIT: u32 = u32::MAX;

impl PartialEq for AbelianFieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor && self.subgroup == other.subgroup
    }
}

impl Eq for AbelianFieldSpec {}

impl std::hash::Hash for AbelianFieldSpec {
    fn hash<S: std::hash::Hasher>(&self, state: &mut S) {
        self.conductor.hash(state);
        self.subgroup.hash(state);
    }
}

impl fmt::Debug for AbelianFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(f={}, H=<{:?}>, n={})", self.conductor, self.generators, self.degree())
    }
}

/// Canonical form: the conductor and a greedy minimal generating set of `H`.
impl fmt::Display for AbelianFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> =
            minimal_generating_set(self.conductor, &self.subgroup).iter().map(|g| g.to_string()).collect();
        write!(f, "f={} H={}", self.conductor, gens.join(","))
    }
}

fn units_mod(f: u64) -> Vec<u64> {
    if f == 1 {
        return vec![0];
    }
    (1..f).filter(|&a| gcd_u64(a, f) == 1).collect()
}

fn close_subgroup(f: u64, gens: &[u64]) -> Vec<u64> {
    let one = 1 % f;
    let mut seen = BTreeSet::from([one]);
    let mut queue = VecDeque::from([one]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = ((x as u128 * (g % f.max(1)) as u128) % f as u128) as u64;
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Smallest divisor `m` of `f` such that `H` contains the kernel of
/// `(Z/f)^* -> (Z/m)^*`, normalised away from `m = 2 mod 4`.
fn minimal_conductor(f: u64, subgroup: &BTreeSet<u64>) -> u64 {
    let mut m = f;
    'shrink: loop {
        for (q, _) in arith::factor_u64(m) {
            let cand = m / q;
            let kernel_inside = units_mod(f)
                .into_iter()
                .filter(|&a| a % cand.max(1) == 1 % cand.max(1))
                .all(|a| subgroup.contains(&a));
            if kernel_inside {
                m = cand;
                continue 'shrink;
            }
        }
        break;
    }
    if m % 4 == 2 {
        m /= 2;
    }
    m
}

impl AbelianFieldSpec {
    /// Validated constructor: `f` must be the true conductor and `H` must
    /// contain `-1`.
    pub fn new(conductor: u64, generators: &[u64]) -> Result<Self> {
        let spec = Self::build(conductor, generators)?;
        let set: BTreeSet<u64> = spec.subgroup.iter().copied().collect();
        let minimal = minimal_conductor(conductor, &set);
        if minimal != conductor {
            return Err(Error::InvalidField(format!(
                "{conductor} is not the conductor of the field (it is {minimal})"
            )));
        }
        Ok(spec)
    }

    fn build(conductor: u64, generators: &[u64]) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::InvalidField("conductor must be positive".into()));
        }
        if conductor % 4 == 2 {
            return Err(Error::InvalidField(format!("conductor {conductor} is 2 mod 4")));
        }
        let f = conductor;
        let mut gens = Vec::new();
        for &g in generators {
            let g = g % f;
            if f > 1 && gcd_u64(g, f) != 1 {
                return Err(Error::InvalidField(format!("generator {g} is not a unit mod {f}")));
            }
            gens.push(g);
        }
        let subgroup = close_subgroup(f, &gens);
        if f > 2 && subgroup.binary_search(&(f - 1)).is_err() {
            return Err(Error::InvalidField(format!(
                "H does not contain -1 mod {f}; the field is not totally real"
            )));
        }
        let units = units_mod(f);
        let mut coset_of = vec![NOT_A_UNIT; f as usize];
        let mut reps = Vec::new();
        for &a in &units {
            if coset_of[a as usize] != NOT_A_UNIT {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(a);
            for &h in &subgroup {
                let b = ((a as u128 * h as u128) % f as u128) as u64;
                coset_of[b as usize] = idx;
            }
        }
        let mut generators = minimal_generating_set(f, &subgroup);
        generators.sort_unstable();
        Ok(AbelianFieldSpec { conductor: f, generators, subgroup, reps, coset_of })
    }

    /// Field cut out by a subgroup `H'` of `(Z/f)^*`, with its conductor
    /// reduced to the minimal one.
    fn from_subgroup(f: u64, subgroup: &BTreeSet<u64>) -> Result<Self> {
        let m = minimal_conductor(f, subgroup);
        let image: BTreeSet<u64> = subgroup.iter().map(|&a| a % m.max(1)).collect();
        let image: Vec<u64> = image.into_iter().collect();
        let gens = minimal_generating_set(m, &image);
        Self::build(m, &gens)
    }

    pub fn rationals() -> Self {
        Self::build(1, &[]).expect("Q is valid")
    }

    /// `Q(sqrt(D))` for a positive fundamental discriminant `D`.
    pub fn real_quadratic(disc: i64) -> Result<Self> {
        if disc <= 1 || !is_fundamental_discriminant(disc) {
            return Err(Error::InvalidDiscriminant(disc));
        }
        let f = disc as u64;
        let kernel: Vec<u64> =
            units_mod(f).into_iter().filter(|&a| kronecker(disc, a) == 1).collect();
        let gens = minimal_generating_set(f, &kernel);
        Self::new(f, &gens)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Elements of `H`, sorted.
    pub fn subgroup(&self) -> &[u64] {
        &self.subgroup
    }

    pub fn degree(&self) -> usize {
        self.reps.len()
    }

    pub fn is_rationals(&self) -> bool {
        self.conductor == 1
    }

    /// Coset representatives, indexed by Galois element.
    pub fn reps(&self) -> &[u64] {
        &self.reps
    }

    /// Galois element containing the residue `a mod f`, if `a` is a unit.
    pub fn element_of(&self, a: u64) -> Option<usize> {
        let idx = self.coset_of[(a % self.conductor) as usize];
        (idx != NOT_A_UNIT).then_some(idx as usize)
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        let f = self.conductor as u128;
        let prod = (self.reps[g] as u128 * self.reps[h] as u128 % f) as u64;
        self.element_of(prod).expect("product of units")
    }

    pub fn inv(&self, g: usize) -> usize {
        (0..self.degree()).find(|&h| self.mul(g, h) == 0).expect("group element has an inverse")
    }

    pub fn pow(&self, g: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k % self.degree().max(1) as u64 {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn order_of(&self, g: usize) -> u64 {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Exponent of the Galois group.
    pub fn exponent(&self) -> u64 {
        (0..self.degree()).map(|g| self.order_of(g)).fold(1, num_integer::lcm)
    }

    pub fn is_cyclic(&self) -> bool {
        self.exponent() == self.degree() as u64
    }

    /// Residues of `(Z/f)^*` lying in the coset of `g`.
    pub fn coset(&self, g: usize) -> Vec<u64> {
        let f = self.conductor as u128;
        let a = self.reps[g] as u128;
        let mut v: Vec<u64> = self.subgroup.iter().map(|&h| (a * h as u128 % f) as u64).collect();
        v.sort_unstable();
        v
    }

    /// Prime divisors of the conductor.
    pub fn ramified_primes(&self) -> Vec<u64> {
        arith::factor_u64(self.conductor).into_iter().map(|(q, _)| q).collect()
    }

    /// `Some(ell)` when the conductor is a power of the single prime `ell`.
    /// The conductor 1 of `Q` is not treated as a prime power.
    pub fn prime_power_conductor(&self) -> Option<u64> {
        match arith::factor_u64(self.conductor).as_slice() {
            [(q, _)] => Some(*q),
            _ => None,
        }
    }

    /// Whether `self` is a subfield of `other`.
    pub fn is_subfield_of(&self, other: &AbelianFieldSpec) -> bool {
        let m = self.conductor;
        other.conductor % m == 0
            && other.subgroup.iter().all(|&h| {
                let r = h % m;
                m == 1 || self.subgroup.binary_search(&r).is_ok()
            })
    }

    /// Restriction `Gal(F/Q) -> Gal(M/Q)` for a subfield `M`, as a table
    /// indexed by the elements of `self`.
    pub fn restriction_to(&self, sub: &AbelianFieldSpec) -> Result<Vec<usize>> {
        if !sub.is_subfield_of(self) {
            return Err(Error::NotSubfield { sub: sub.conductor, sup: self.conductor });
        }
        Ok(self
            .reps
            .iter()
            .map(|&r| sub.element_of(r % sub.conductor).expect("unit restricts to a unit"))
            .collect())
    }

    /// Elements of the kernel of restriction to `sub`, i.e. `Gal(F/M)`.
    pub fn relative_group(&self, sub: &AbelianFieldSpec) -> Result<Vec<usize>> {
        let res = self.restriction_to(sub)?;
        Ok((0..self.degree()).filter(|&g| res[g] == 0).collect())
    }

    /// Fixed field of a subgroup of `Gal(F/Q)` given by element indices.
    pub fn fixed_field(&self, elements: &[usize]) -> Result<AbelianFieldSpec> {
        let f = self.conductor as u128;
        let mut big = BTreeSet::new();
        for &g in elements {
            for &h in &self.subgroup {
                big.insert((self.reps[g] as u128 * h as u128 % f) as u64);
            }
        }
        Self::from_subgroup(self.conductor, &big)
    }

    /// All subgroups of `Gal(F/Q)`, each as a sorted list of element indices.
    pub fn galois_subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([vec![0usize]]);
        found.insert(vec![0]);
        while let Some(s) = queue.pop_front() {
            for g in 0..n {
                if s.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = s.clone();
                gens.push(g);
                let closed = self.close(&gens);
                if found.insert(closed.clone()) {
                    queue.push_back(closed);
                }
            }
        }
        found.into_iter().collect()
    }

    fn close(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn to_catalog_line(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        format!("f={} H={}", self.conductor, gens.join(","))
    }
}

fn minimal_generating_set(f: u64, subgroup: &[u64]) -> Vec<u64> {
    let mut gens = Vec::new();
    let mut span: BTreeSet<u64> = close_subgroup(f, &[]).into_iter().collect();
    for &a in subgroup {
        if !span.contains(&a) {
            gens.push(a);
            span = close_subgroup(f, &gens).into_iter().collect();
        }
    }
    gens
}

/// All subfields `Q <= M <= F`, each with its true conductor. Sorted by
/// degree, then conductor.
pub fn subfields(field: &AbelianFieldSpec) -> Vec<AbelianFieldSpec> {
    let mut out: Vec<AbelianFieldSpec> = field
        .galois_subgroups()
        .iter()
        .map(|s| field.fixed_field(s).expect("subgroup of a valid field"))
        .collect();
    out.sort_by_key(|m| (m.degree(), m.conductor, m.generators.clone()));
    out.dedup();
    out
}

/// Class of `Frob_ell` in `Gal(M/Q)`.
pub fn frobenius_class(ell: u64, field: &AbelianFieldSpec) -> Result<usize> {
    if field.conductor > 1 && gcd_u64(ell, field.conductor) != 1 {
        return Err(Error::Ramified { ell, m: field.conductor });
    }
    Ok(field.element_of(ell % field.conductor).expect("ell is a unit"))
}

pub fn is_totally_split(p: u64, field: &AbelianFieldSpec) -> Result<bool> {
    if field.conductor % p == 0 && field.conductor > 1 {
        return Err(Error::Ramified { ell: p, m: field.conductor });
    }
    Ok(frobenius_class(p, field)? == 0)
}

pub fn require_split(p: u64, field: &AbelianFieldSpec) -> Result<()> {
    if is_totally_split(p, field)? {
        Ok(())
    } else {
        Err(Error::NotSplit { p, f: field.conductor })
    }
}

/// A character of `Gal(F/Q)` with values `zeta_E^k(g)`, where `E` is the
/// exponent of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSpec {
    pub field: AbelianFieldSpec,
    /// `E`: the order of the root of unity the exponents refer to.
    pub value_order: u64,
    /// `k(g)` for each Galois element, modulo `value_order`.
    pub exponents: Vec<u64>,
    pub order: u64,
    pub conductor: u64,
    /// Fixed field of the kernel.
    pub cut_out: AbelianFieldSpec,
    /// Index of the Galois-conjugacy class (`chi ~ chi^j`, `gcd(j, order) = 1`).
    pub orbit: usize,
}

impl CharacterSpec {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.exponents.len()).filter(|&g| self.exponents[g] == 0).collect()
    }

    /// Exponent of `chi^{-1}(g)`.
    pub fn inverse_exponent(&self, g: usize) -> u64 {
        (self.value_order - self.exponents[g]) % self.value_order
    }

    /// Exponent of `chi(a)` for an integer `a`, or `None` when
    /// `gcd(a, f_chi) > 1` (the primitive character vanishes there).
    pub fn exponent_at_integer(&self, a: u64) -> Option<u64> {
        let fc = self.conductor;
        if fc > 1 && gcd_u64(a, fc) != 1 {
            return None;
        }
        let f = self.field.conductor();
        // lift a mod f_chi to a unit mod f by CRT
        let mut b = a % fc.max(1);
        if f > 1 {
            while gcd_u64(b, f) != 1 {
                b += fc.max(1);
            }
        }
        let g = self.field.element_of(b % f)?;
        Some(self.exponents[g])
    }
}

/// All characters of `Gal(F/Q)`.
pub fn characters(field: &AbelianFieldSpec) -> Vec<CharacterSpec> {
    let n = field.degree();
    let e = field.exponent();
    // generating set and BFS words
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![0usize];
    for g in 0..n {
        if !span.contains(&g) {
            gens.push(g);
            span = field.close(&gens);
        }
    }
    let mut results = Vec::new();
    let total = (e as usize).pow(gens.len() as u32);
    for code in 0..total {
        let mut ks = Vec::with_capacity(gens.len());
        let mut c = code;
        for _ in 0..gens.len() {
            ks.push((c % e as usize) as u64);
            c /= e as usize;
        }
        if let Some(exps) = extend_hom(field, &gens, &ks, e) {
            results.push(exps);
        }
    }
    debug_assert_eq!(results.len(), n);
    let mut specs: Vec<CharacterSpec> = results
        .into_iter()
        .map(|exps| {
            let g = exps.iter().fold(e, |acc, &k| gcd_u64(acc, k));
            let order = e / g;
            let kernel: Vec<usize> = (0..n).filter(|&i| exps[i] == 0).collect();
            let cut_out = field.fixed_field(&kernel).expect("kernel is a subgroup");
            CharacterSpec {
                field: field.clone(),
                value_order: e,
                exponents: exps,
                order,
                conductor: cut_out.conductor(),
                cut_out,
                orbit: 0,
            }
        })
        .collect();
    specs.sort_by(|a, b| (a.order, &a.exponents).cmp(&(b.order, &b.exponents)));
    assign_orbits(&mut specs);
    specs
}

fn assign_orbits(specs: &mut [CharacterSpec]) {
    let mut orbit_of: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut next = 0;
    for spec in specs.iter_mut() {
        if let Some(&o) = orbit_of.get(&spec.exponents) {
            spec.orbit = o;
            continue;
        }
        let e = spec.value_order;
        for j in 1..=e {
            if gcd_u64(j, spec.order) == 1 {
                let conj: Vec<u64> = spec.exponents.iter().map(|&k| k * j % e).collect();
                orbit_of.entry(conj).or_insert(next);
            }
        }
        spec.orbit = next;
        next += 1;
    }
}

fn extend_hom(field: &AbelianFieldSpec, gens: &[usize], ks: &[u64], e: u64) -> Option<Vec<u64>> {
    let n = field.degree();
    let mut val: Vec<Option<u64>> = vec![None; n];
    val[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let kx = val[x].unwrap();
        for (&g, &kg) in gens.iter().zip(ks) {
            let y = field.mul(x, g);
            let ky = (kx + kg) % e;
            match val[y] {
                None => {
                    val[y] = Some(ky);
                    queue.push_back(y);
                }
                Some(prev) if prev != ky => return None,
                _ => {}
            }
        }
    }
    val.into_iter().collect()
}

/// Characters of order prime to `p`, sorted by order and grouped by orbit.
pub fn characters_prime_to_p(field: &AbelianFieldSpec, p: u64) -> Vec<CharacterSpec> {
    characters(field).into_iter().filter(|c| c.order % p != 0).collect()
}

/// Kronecker symbol `(d / n)` for `n > 0`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return (d.abs() == 1) as i32;
    }
    let mut n = n;
    let mut result = 1i32;
    while n % 2 == 0 {
        n /= 2;
        let dm8 = d.rem_euclid(8);
        if dm8 % 2 == 0 {
            return 0;
        }
        if dm8 == 3 || dm8 == 5 {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    result * jacobi(d.rem_euclid(n as i64) as u64, n)
}

fn jacobi(mut a: u64, mut n: u64) -> i32 {
    let mut result = 1;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    let squarefree = |m: i64| arith::factor_u64(m.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => d != 1 && squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// Positive fundamental discriminants up to `bound`.
pub fn fundamental_discriminants(bound: i64) -> Vec<i64> {
    (5..=bound).filter(|&d| is_fundamental_discriminant(d)).collect()
}

/// Parses one catalog line `f=<int> H=<g1,g2,...>`. Blank lines and `#`
/// comments yield `None`.
pub fn parse_catalog_line(line: &str) -> std::result::Result<Option<AbelianFieldSpec>, String> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let mut f = None;
    let mut gens: Option<Vec<u64>> = None;
    for token in line.split_whitespace() {
        let (key, value) = token.split_once('=').ok_or_else(|| format!("malformed token {token:?}"))?;
        match key {
            "f" => {
                let v: u64 = value.parse().map_err(|_| format!("bad conductor {value:?}"))?;
                if v > 1_000_000 {
                    return Err(format!("conductor {v} beyond the supported range"));
                }
                f = Some(v);
            }
            "H" => {
                let parsed: std::result::Result<Vec<u64>, _> = value
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.trim().parse::<u64>())
                    .collect();
                gens = Some(parsed.map_err(|_| format!("bad generator list {value:?}"))?);
            }
            other => return Err(format!("unknown key {other:?}")),
        }
    }
    let f = f.ok_or("missing f=")?;
    let gens = gens.ok_or("missing H=")?;
    AbelianFieldSpec::new(f, &gens).map(Some).map_err(|e| e.to_string())
}

/// Parses a whole catalog; errors carry 1-based line numbers.
pub fn parse_catalog(text: &str) -> Result<Vec<AbelianFieldSpec>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        match parse_catalog_line(line) {
            Ok(Some(spec)) => out.push(spec),
            Ok(None) => {}
            Err(msg) => return Err(Error::Parse { line: i + 1, msg }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_has_only_itself() {
        let q = AbelianFieldSpec::rationals();
        assert_eq!(q.degree(), 1);
        let subs = subfields(&q);
        assert_eq!(subs, vec![q.clone()]);
        assert_eq!(frobenius_class(7, &q).unwrap(), 0);
        assert!(is_totally_split(11, &q).unwrap());
    }

    #[test]
    fn sqrt2_subfields_and_frobenius() {
        let f = AbelianFieldSpec::new(8, &[7]).unwrap();
        assert_eq!(f.degree(), 2);
        let subs = subfields(&f);
        assert_eq!(subs.len(), 2);
        assert!(subs[0].is_rationals());
        assert_eq!(subs[1], f);
        assert_eq!(frobenius_class(7, &f).unwrap(), 0);
        assert_ne!(frobenius_class(3, &f).unwrap(), 0);
        assert!(is_totally_split(7, &f).unwrap());
        assert!(!is_totally_split(3, &f).unwrap());
        assert!(matches!(frobenius_class(2, &f), Err(Error::Ramified { .. })));
        assert_eq!(AbelianFieldSpec::real_quadratic(8).unwrap(), f);
    }

    #[test]
    fn conductor_15_real_subfield() {
        // maximal real subfield of Q(zeta_15): G = (Z/15)^*/{+-1}, order 4
        let f = AbelianFieldSpec::new(15, &[14]).unwrap();
        assert_eq!(f.degree(), 4);
        let subs = subfields(&f);
        let degrees: Vec<usize> = subs.iter().map(|m| m.degree()).collect();
        let n_sub = f.galois_subgroups().len();
        assert_eq!(subs.len(), n_sub);
        assert_eq!(degrees.first(), Some(&1));
        assert_eq!(degrees.last(), Some(&4));
        for m in &subs {
            // every returned conductor is minimal
            assert_eq!(AbelianFieldSpec::new(m.conductor(), m.generators()).unwrap(), *m);
            assert!(m.is_subfield_of(&f));
        }
        // the real quadratic subfield is Q(sqrt 5)
        let quad: Vec<_> = subs.iter().filter(|m| m.degree() == 2).collect();
        assert!(quad.iter().any(|m| m.conductor() == 5));
    }

    #[test]
    fn rejects_non_minimal_or_imaginary() {
        // Q(sqrt 2) presented with conductor 16
        assert!(matches!(AbelianFieldSpec::new(16, &[7, 15, 9]), Err(Error::InvalidField(_))));
        // Q(i): H = {1} mod 4 does not contain -1
        assert!(matches!(AbelianFieldSpec::new(4, &[]), Err(Error::InvalidField(_))));
        assert!(matches!(AbelianFieldSpec::new(6, &[5]), Err(Error::InvalidField(_))));
    }

    #[test]
    fn sqrt79_splitting_of_3() {
        let f = AbelianFieldSpec::real_quadratic(316).unwrap();
        assert_eq!(f.conductor(), 316);
        assert_eq!(f.degree(), 2);
        assert!(is_totally_split(3, &f).unwrap());
        // 3 splits iff 79 is a square mod 3
        assert_eq!(79 % 3, 1);
    }

    #[test]
    fn quadratic_characters() {
        let f = AbelianFieldSpec::real_quadratic(8).unwrap();
        let chars = characters_prime_to_p(&f, 7);
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_trivial());
        assert_eq!(chars[1].order, 2);
        assert_eq!(chars[1].conductor, 8);
        assert_eq!(chars[1].exponent_at_integer(3), Some(1));
        assert_eq!(chars[1].exponent_at_integer(7), Some(0));
        assert_eq!(chars[1].exponent_at_integer(2), None);
    }

    #[test]
    fn cyclic_quartic_characters() {
        // degree-4 subfield of Q(zeta_17)
        let f = AbelianFieldSpec::new(17, &[16, 13]).unwrap();
        assert_eq!(f.degree(), 4);
        assert!(f.is_cyclic());
        let chars = characters_prime_to_p(&f, 3);
        let orders: Vec<u64> = chars.iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![1, 2, 4, 4]);
        // the two order-4 characters are conjugate
        assert_eq!(chars[2].orbit, chars[3].orbit);
        for c in &chars {
            for g in 0..4 {
                for h in 0..4 {
                    let lhs = c.exponents[f.mul(g, h)];
                    assert_eq!(lhs, (c.exponents[g] + c.exponents[h]) % c.value_order);
                }
            }
        }
    }

    #[test]
    fn catalog_parsing() {
        let text = "# comment\nf=8 H=7\n\nf=5 H=4\n";
        let fields = parse_catalog(text).unwrap();
        assert_eq!(fields.len(), 2);
        assert_eq!(fields[0].to_catalog_line(), "f=8 H=7");
        let err = parse_catalog("f=8 H=7\nf=8 X=3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn fundamental_discriminants_small() {
        assert_eq!(fundamental_discriminants(30), vec![5, 8, 12, 13, 17, 21, 24, 28, 29]);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(316, 3), 1);
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(5, 10), 0);
    }
}
