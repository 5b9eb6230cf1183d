use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use super::arith::{self, add_mod, mul_mod, neg_mod, sub_mod};
use super::fpoly::{self, FpPoly};
use crate::error::{Error, Result};

/// The ring `Z_{p^d} / p^N` presented as `(Z/p^N)[x] / (F(x))`, where `F` is
/// monic of degree `d` and its root `x` is the Teichmuller generator of the
/// unit group of the residue field.
#[derive(Debug, PartialEq, Eq)]
pub struct PadicContext {
    p: u64,
    degree: usize,
    precision: u32,
    pn: u128,
    /// `c_0 .. c_{d-1}` with `x^d = -(c_0 + c_1 x + ... + c_{d-1} x^{d-1})`.
    modulus: Vec<u128>,
    residue_modulus: Vec<u64>,
    teich_gen: Vec<u128>,
    /// `x^(p i)` reduced, for `i < d`; the Frobenius matrix.
    frob_images: Vec<Vec<u128>>,
    unit_order: u128,
    unit_order_primes: Vec<u128>,
}

static CONTEXT_CACHE: Lazy<Mutex<HashMap<(u64, usize, u32), Arc<PadicContext>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

static TABLE_DIR: Lazy<Mutex<Option<PathBuf>>> = Lazy::new(|| Mutex::new(None));

/// Directory for the on-disk table of residue moduli and factorizations of
/// `p^d - 1`, shared across runs. `None` disables it.
pub fn set_table_cache_dir(dir: Option<PathBuf>) {
    *TABLE_DIR.lock().unwrap() = dir;
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    p: u64,
    d: usize,
    residue_modulus: Vec<u64>,
    unit_order_primes: Vec<String>,
}

fn table_path(p: u64, d: usize) -> Option<PathBuf> {
    TABLE_DIR.lock().unwrap().as_ref().map(|dir| dir.join(format!("modulus-p{p}-d{d}.json")))
}

/// A cached entry is used only if it checks out: the primes exhaust
/// `p^d - 1` and the polynomial is primitive.
fn load_table(p: u64, d: usize, unit_order: u128) -> Option<(FpPoly, Vec<u128>)> {
    let text = std::fs::read_to_string(table_path(p, d)?).ok()?;
    let e: TableEntry = serde_json::from_str(&text).ok()?;
    let primes: Vec<u128> = e.unit_order_primes.iter().map(|s| s.parse().ok()).collect::<Option<_>>()?;
    let mut rest = unit_order;
    for &q in &primes {
        if q < 2 || rest % q != 0 || !arith::is_probable_prime(q) {
            return None;
        }
        while rest % q == 0 {
            rest /= q;
        }
    }
    let f = FpPoly { coeffs: e.residue_modulus };
    let ok = e.p == p
        && e.d == d
        && rest == 1
        && f.coeffs.len() == d + 1
        && f.coeffs.iter().all(|&c| c < p)
        && f.coeffs[d] == 1
        && fpoly::is_irreducible(&f, p)
        && fpoly::root_is_primitive(&f, p, unit_order, &primes);
    ok.then_some((f, primes))
}

fn store_table(p: u64, d: usize, f: &FpPoly, primes: &[u128]) {
    let Some(path) = table_path(p, d) else { return };
    let entry = TableEntry {
        p,
        d,
        residue_modulus: f.coeffs.clone(),
        unit_order_primes: primes.iter().map(|q| q.to_string()).collect(),
    };
    // best effort: an unwritable cache only costs recomputation
    if let Some(dir) = path.parent() {
        let _ = std::fs::create_dir_all(dir);
    }
    let _ = std::fs::write(&path, serde_json::to_string(&entry).expect("serializable"));
}

impl PadicContext {
    /// Builds the context for `(p, d, N)`. The result depends only on the
    /// three parameters.
    pub fn new(p: u64, degree: usize, precision: u32) -> Result<Self> {
        if p == 2 || !arith::is_prime_u64(p) {
            return Err(Error::InvalidPrime(p));
        }
        if precision < 2 {
            return Err(Error::PrecisionTooSmall(precision));
        }
        if degree == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let wide = || Error::ModulusTooWide { p, d: degree, n: precision };
        let pn = arith::checked_prime_power(p, precision).ok_or_else(wide)?;
        let unit_order = arith::checked_prime_power(p, degree as u32).ok_or_else(wide)? - 1;
        let cached = if degree > 1 { load_table(p, degree, unit_order) } else { None };
        let unit_order_primes = match &cached {
            Some((_, primes)) => primes.clone(),
            None => arith::prime_factors(unit_order),
        };

        if degree == 1 {
            let g = smallest_primitive_root(p, &unit_order_primes);
            let mut t = g as u128;
            for _ in 0..=precision {
                t = arith::pow_mod(t, p as u128, pn);
            }
            return Ok(PadicContext {
                p,
                degree,
                precision,
                pn,
                modulus: vec![neg_mod(t, pn)],
                residue_modulus: vec![(p - g) % p, 1],
                teich_gen: vec![t],
                frob_images: vec![vec![1]],
                unit_order,
                unit_order_primes,
            });
        }

        let residue = match cached {
            Some((f, _)) => f,
            None => {
                let f = find_primitive_modulus(p, degree, unit_order, &unit_order_primes);
                store_table(p, degree, &f, &unit_order_primes);
                f
            }
        };
        let lifted: Vec<u128> = residue.coeffs[..degree].iter().map(|&c| c as u128).collect();

        // Teichmuller lift of the root x in (Z/p^N)[x]/(lifted).
        let p_d = unit_order + 1;
        let mut t = monomial(1, degree);
        for _ in 0..=precision {
            let next = pow_raw(&t, p_d, &lifted, pn);
            if next == t {
                break;
            }
            t = next;
        }

        // Minimal polynomial of t: product of (X - t^(p^i)) for i < d.
        let mut conj = t.clone();
        let mut minpoly: Vec<Vec<u128>> = vec![monomial(0, degree)];
        for _ in 0..degree {
            let mut next = vec![vec![0u128; degree]; minpoly.len() + 1];
            for (k, c) in minpoly.iter().enumerate() {
                add_into(&mut next[k + 1], c, pn);
                let prod = mul_raw(c, &conj, &lifted, pn);
                sub_into(&mut next[k], &prod, pn);
            }
            minpoly = next;
            conj = pow_raw(&conj, p as u128, &lifted, pn);
        }
        let mut modulus = Vec::with_capacity(degree);
        for c in &minpoly[..degree] {
            if c[1..].iter().any(|&v| v != 0) {
                return Err(Error::SelfCheck(
                    "minimal polynomial of the Teichmuller generator is not over Z_p".into(),
                ));
            }
            modulus.push(c[0]);
        }

        let x = monomial(1, degree);
        let xp = pow_raw(&x, p as u128, &modulus, pn);
        let mut frob_images = Vec::with_capacity(degree);
        let mut acc = monomial(0, degree);
        for _ in 0..degree {
            frob_images.push(acc.clone());
            acc = mul_raw(&acc, &xp, &modulus, pn);
        }

        let ctx = PadicContext {
            p,
            degree,
            precision,
            pn,
            modulus,
            residue_modulus: residue.coeffs,
            teich_gen: x,
            frob_images,
            unit_order,
            unit_order_primes,
        };
        if pow_raw(&ctx.teich_gen, unit_order, &ctx.modulus, pn) != monomial(0, degree) {
            return Err(Error::SelfCheck("Teichmuller generator does not have order p^d-1".into()));
        }
        Ok(ctx)
    }

    /// Process-wide cached construction.
    pub fn shared(p: u64, degree: usize, precision: u32) -> Result<Arc<Self>> {
        let key = (p, degree, precision);
        if let Some(ctx) = CONTEXT_CACHE.lock().unwrap().get(&key) {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(PadicContext::new(p, degree, precision)?);
        CONTEXT_CACHE.lock().unwrap().insert(key, ctx.clone());
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^N`.
    pub fn modulus_int(&self) -> u128 {
        self.pn
    }

    /// Constant coefficients of the monic defining polynomial, low degree first.
    pub fn modulus_coeffs(&self) -> &[u128] {
        &self.modulus
    }

    /// Defining polynomial of the residue field (monic, low degree first).
    pub fn residue_modulus(&self) -> &[u64] {
        &self.residue_modulus
    }

    /// `p^d - 1`.
    pub fn unit_order(&self) -> u128 {
        self.unit_order
    }

    pub fn unit_order_primes(&self) -> &[u128] {
        &self.unit_order_primes
    }

    pub(crate) fn teich_gen_raw(&self) -> &[u128] {
        &self.teich_gen
    }

    pub(crate) fn frob_images(&self) -> &[Vec<u128>] {
        &self.frob_images
    }

    pub(crate) fn mul_raw(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        mul_raw(a, b, &self.modulus, self.pn)
    }
}

fn smallest_primitive_root(p: u64, primes: &[u128]) -> u64 {
    let order = (p - 1) as u128;
    (2..p)
        .find(|&g| primes.iter().all(|&q| arith::pow_mod(g as u128, order / q, p as u128) != 1))
        .unwrap_or(1)
}

/// Smallest monic irreducible polynomial of degree `d` over F_p whose root
/// generates the multiplicative group, where polynomials are ordered by the
/// integer `sum c_i p^i` of their non-leading coefficients.
fn find_primitive_modulus(p: u64, d: usize, order: u128, primes: &[u128]) -> FpPoly {
    let mut k: u128 = 0;
    loop {
        k += 1;
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut rest = k;
        for _ in 0..d {
            coeffs.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        if rest > 0 {
            unreachable!("a primitive polynomial of every degree exists");
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        let f = FpPoly { coeffs };
        if fpoly::is_irreducible(&f, p) && fpoly::root_is_primitive(&f, p, order, primes) {
            return f;
        }
    }
}

pub(crate) fn monomial(k: usize, d: usize) -> Vec<u128> {
    let mut v = vec![0u128; d];
    v[k] = 1;
    v
}

fn add_into(acc: &mut [u128], x: &[u128], m: u128) {
    for (a, &b) in acc.iter_mut().zip(x) {
        *a = add_mod(*a, b, m);
    }
}

fn sub_into(acc: &mut [u128], x: &[u128], m: u128) {
    for (a, &b) in acc.iter_mut().zip(x) {
        *a = sub_mod(*a, b, m);
    }
}

/// Product in `(Z/m)[x] / (x^d + c_{d-1} x^{d-1} + ... + c_0)`.
pub(crate) fn mul_raw(a: &[u128], b: &[u128], modulus: &[u128], m: u128) -> Vec<u128> {
    let d = modulus.len();
    if d == 1 {
        return vec![mul_mod(a[0], b[0], m)];
    }
    let mut prod = vec![0u128; 2 * d - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            prod[i + j] = add_mod(prod[i + j], mul_mod(ai, bj, m), m);
        }
    }
    for k in (d..2 * d - 1).rev() {
        let top = prod[k];
        if top == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &c) in modulus.iter().enumerate() {
            let idx = k - d + i;
            prod[idx] = sub_mod(prod[idx], mul_mod(top, c, m), m);
        }
    }
    prod.truncate(d);
    prod
}

pub(crate) fn pow_raw(base: &[u128], mut exp: u128, modulus: &[u128], m: u128) -> Vec<u128> {
    let d = modulus.len();
    let mut acc = monomial(0, d);
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_raw(&acc, &b, modulus, m);
        }
        exp >>= 1;
        if exp > 0 {
            b = mul_raw(&b, &b, modulus, m);
        }
    }
    acc
}
