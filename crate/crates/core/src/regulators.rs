//! Fundamental units of real quadratic fields, `p`-adic log vectors of units,
//! Leopoldt regulator valuations and the Solomon index formula.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::Place;
use crate::error::{Error, Result};
use crate::fields::{self, AbelianFieldSpec};
use crate::groupring::{self, GroupRingElement, IndexValuation};
use crate::padic::arith;
use crate::padic::digits;
use crate::padic::PadicElement;
use crate::solomon;

/// `eps_0 = (x + y sqrt(D)) / 2 > 1`, the fundamental unit of discriminant `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitRecord {
    pub disc: i64,
    pub x: BigInt,
    pub y: BigInt,
    pub norm: i8,
}

impl UnitRecord {
    pub fn pell_holds(&self) -> bool {
        let lhs = &self.x * &self.x - BigInt::from(self.disc) * &self.y * &self.y;
        lhs == BigInt::from(4 * self.norm as i64)
    }

    /// `eps_0^k` for `k >= 1`.
    pub fn power(&self, k: u32) -> UnitRecord {
        let d = BigInt::from(self.disc);
        let mut x = BigInt::from(2);
        let mut y = BigInt::zero();
        for _ in 0..k {
            // (x + y r)(X + Y r) / 2 with r^2 = D
            let nx = (&x * &self.x + &d * &y * &self.y) / 2;
            let ny = (&x * &self.y + &y * &self.x) / 2;
            x = nx;
            y = ny;
        }
        let norm = if self.norm == -1 && k % 2 == 1 { -1 } else { 1 };
        UnitRecord { disc: self.disc, x, y, norm }
    }
}

/// Fundamental unit via the continued fraction of `(s + sqrt(D)) / 2`,
/// `s = D mod 2`: the first convergent `p/q` with `N(p - q w) = +-1` gives
/// `eps_0 = (2p - s q + q sqrt(D)) / 2`.
pub fn fundamental_unit(disc: i64) -> Result<UnitRecord> {
    if disc <= 1 || !fields::is_fundamental_discriminant(disc) {
        return Err(Error::InvalidDiscriminant(disc));
    }
    let s = disc.rem_euclid(2);
    let root = (disc as u64).sqrt() as i64;
    let (mut pp, mut qq) = (s, 2i64);
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    let big_d = BigInt::from(disc);
    let big_s = BigInt::from(s);
    for _ in 0..10_000_000u64 {
        let a = (pp + root).div_euclid(qq);
        let p_next = BigInt::from(a) * &p_cur + &p_prev;
        let q_next = BigInt::from(a) * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        let norm4 = BigInt::from(4) * &p_cur * &p_cur - BigInt::from(4) * &big_s * &p_cur * &q_cur
            + &q_cur * &q_cur * (&big_s - &big_d);
        if norm4.abs() == BigInt::from(4) {
            let x = BigInt::from(2) * &p_cur - &big_s * &q_cur;
            let unit = UnitRecord {
                disc,
                x,
                y: q_cur.clone(),
                norm: if norm4.is_positive() { 1 } else { -1 },
            };
            if !unit.pell_holds() {
                return Err(Error::SelfCheck(format!("Pell relation fails for D = {disc}")));
            }
            return Ok(unit);
        }
        pp = a * qq - pp;
        qq = (disc - pp * pp) / qq;
    }
    Err(Error::SelfCheck(format!("no unit found for D = {disc}")))
}

fn bigint_mod(x: &BigInt, m: u128) -> u128 {
    let mb = BigInt::from(m);
    let r = ((x % &mb) + &mb) % &mb;
    r.to_u128().expect("reduced")
}

/// `iota((x + y sqrt(D)) / 2)` and its conjugate, in `Z_p`.
pub fn embed_quadratic(x: &BigInt, y: &BigInt, place: &Place) -> Result<(PadicElement, PadicElement)> {
    let ctx = place.zp_context();
    let s = place.quadratic_sqrt()?;
    let m = ctx.modulus_int();
    let xe = PadicElement::from_zp(ctx, bigint_mod(x, m), s.precision());
    let ye = PadicElement::from_zp(ctx, bigint_mod(y, m), s.precision());
    let half = PadicElement::from_int(ctx, 2).inverse()?;
    let ys = &ye * &s;
    Ok((&(&xe + &ys) * &half, &(&xe - &ys) * &half))
}

/// `(log_p iota_v(u))_{v in S}` for a quadratic field, with `iota_v = iota o g_v^{-1}`.
pub fn lambda_vector(x: &BigInt, y: &BigInt, place: &Place) -> Result<Vec<PadicElement>> {
    let (a, b) = embed_quadratic(x, y, place)?;
    Ok(vec![a.iwasawa_log()?, b.iwasawa_log()?])
}

pub fn lambda_of_unit(u: &UnitRecord, place: &Place) -> Result<Vec<PadicElement>> {
    lambda_vector(&u.x, &u.y, place)
}

/// Valuation of the regulator, relative to `I(S)` and to `pI(S)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegulatorValuation {
    pub in_is: u32,
    pub in_p_is: i64,
}

impl RegulatorValuation {
    fn from_is(v: u32, rank: usize) -> Self {
        RegulatorValuation { in_is: v, in_p_is: v as i64 - rank as i64 }
    }
}

/// Coordinates of vectors of `I(S)` in the basis `w_i - w_{i+1}`: partial sums.
fn is_coordinates(v: &[u128], m: u128) -> Vec<u128> {
    let mut acc = 0u128;
    v[..v.len() - 1]
        .iter()
        .map(|&x| {
            acc = arith::add_mod(acc, x, m);
            acc
        })
        .collect()
}

/// Index valuation of the lattice spanned by `rows` (each a sum-zero log
/// vector) inside `I(S)`.
pub fn regulator_valuation_from_logs(rows: &[Vec<u128>], p: u64, prec: u32, guard: u32) -> Result<RegulatorValuation> {
    let n = rows.first().map(|r| r.len()).ok_or(Error::ZeroInput("no unit logs"))?;
    let m = arith::checked_prime_power(p, prec).ok_or(Error::ModulusTooWide { p, d: 1, n: prec })?;
    for r in rows {
        if r.len() != n {
            return Err(Error::Mismatch("unit log vectors of different lengths".into()));
        }
        if r.iter().fold(0u128, |acc, &x| arith::add_mod(acc, x % m, m)) != 0 {
            return Err(Error::Mismatch("unit log vector does not sum to zero".into()));
        }
    }
    let mut coords: Vec<Vec<u128>> = rows.iter().map(|r| is_coordinates(r, m)).collect();
    let divs = groupring::smith_valuations(&mut coords, p, prec);
    let rank = n - 1;
    let limit = prec.saturating_sub(guard);
    if divs.len() < rank || divs.iter().any(|&d| d >= limit) {
        return Err(Error::InsufficientPrecision(format!(
            "unit log lattice is not of full rank in I(S) at precision {prec}"
        )));
    }
    Ok(RegulatorValuation::from_is(divs.iter().sum(), rank))
}

/// `v_p(R^Leop)` for a real quadratic field from its fundamental unit.
pub fn leopoldt_regulator_valuation(field: &AbelianFieldSpec, place: &Place, guard: u32) -> Result<RegulatorValuation> {
    if field.degree() != 2 {
        return Err(Error::InvalidField("quadratic fields only; use unit data for higher degree".into()));
    }
    let u = fundamental_unit(field.conductor() as i64)?;
    let logs = lambda_of_unit(&u, place)?;
    let prec = logs.iter().map(|l| l.precision()).min().unwrap();
    let row: Vec<u128> = logs.iter().map(|l| l.rational_value()).collect::<Result<_>>()?;
    regulator_valuation_from_logs(&[row], place.p(), prec, guard)
}

/// Regulator valuations in `I(S)` of the unit lattice and of the lattice
/// enlarged by the `S`-unit generating `P^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrossComparison {
    pub k: u32,
    pub v_leop: u32,
    pub v_gross: u32,
}

/// Compares the lattices `lambda(U_F)` and `lambda(U_F) + Z_p lambda(pi)`
/// in `I(S)` for a real quadratic field.
pub fn gross_comparison(field: &AbelianFieldSpec, place: &Place, guard: u32) -> Result<GrossComparison> {
    if field.degree() != 2 {
        return Err(Error::InvalidField("quadratic fields only".into()));
    }
    let disc = field.conductor() as i64;
    let group = crate::classgrp::ClassGroup::new(disc)?;
    let pi = crate::classgrp::prime_power_generator(&group, place.p())?;
    let unit = lambda_of_unit(&fundamental_unit(disc)?, place)?;
    let ctx = place.zp_context();
    let two = BigInt::from(2);
    let num = lambda_vector(&(&two * &pi.x), &(&two * &pi.y), place)?;
    let m = ctx.modulus_int();
    let log_z = PadicElement::from_zp(ctx, bigint_mod(&pi.z, m), place.precision()).iwasawa_log()?;
    let s_unit: Vec<PadicElement> = num.iter().map(|l| l - &log_z).collect();
    let prec = unit.iter().chain(&s_unit).map(|l| l.precision()).min().unwrap();
    let row = |v: &[PadicElement]| -> Result<Vec<u128>> {
        v.iter().map(|l| l.with_precision(prec).rational_value()).collect()
    };
    let (u, s_row) = (row(&unit)?, row(&s_unit)?);
    let leop = regulator_valuation_from_logs(&[u.clone()], place.p(), prec, guard)?;
    let gross = regulator_valuation_from_logs(&[u, s_row], place.p(), prec, guard)?;
    Ok(GrossComparison { k: pi.k, v_leop: leop.in_is, v_gross: gross.in_is })
}

/// One line of a units file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitsRow {
    pub f: u64,
    #[serde(rename = "H")]
    pub h: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub unit_logs: Vec<Vec<String>>,
}

impl UnitsRow {
    pub fn field(&self) -> Result<AbelianFieldSpec> {
        AbelianFieldSpec::new(self.f, &self.h)
    }

    /// Decoded log vectors and their common precision. A row that names
    /// its own prime must agree with `p`.
    pub fn decoded(&self, p: u64) -> Result<(Vec<Vec<u128>>, u32)> {
        if self.p.is_some_and(|q| q != p) {
            return Err(Error::Mismatch(format!("units row is for p = {}, not {p}", self.p.unwrap())));
        }
        let mut prec = u32::MAX;
        let mut rows = Vec::new();
        for unit in &self.unit_logs {
            let mut row = Vec::new();
            for s in unit {
                let (v, k) = digits::decode(s, p)?;
                prec = prec.min(k);
                row.push(v);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::ZeroInput("no unit logs"));
        }
        let m = arith::checked_prime_power(p, prec).expect("decoded widths fit");
        for r in rows.iter_mut() {
            for v in r.iter_mut() {
                *v %= m;
            }
        }
        Ok((rows, prec))
    }
}

/// Parses one units line; digit strings are read in base `p` (the row's own
/// `p` when present).
pub fn parse_units_line(line: &str, p: u64) -> std::result::Result<UnitsRow, String> {
    let row: UnitsRow = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let p = row.p.unwrap_or(p);
    if p == 2 || !arith::is_prime_u64(p) {
        return Err(format!("p = {p} is not an odd prime"));
    }
    let field = row.field().map_err(|e| e.to_string())?;
    if row.unit_logs.len() + 1 != field.degree() {
        return Err(format!("expected {} units, found {}", field.degree() - 1, row.unit_logs.len()));
    }
    if row.unit_logs.iter().any(|u| u.len() != field.degree()) {
        return Err("each unit needs one log per place".into());
    }
    for u in &row.unit_logs {
        for s in u {
            digits::decode(s, p).map_err(|e| e.to_string())?;
        }
    }
    Ok(row)
}

pub fn parse_units(text: &str, p: u64) -> Result<Vec<UnitsRow>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_units_line(line, p).map_err(|msg| Error::Parse { line: i + 1, msg })?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexFormulaOutcome {
    /// `v_p((Z_p[G] : Sol_1(F)))`.
    pub sol_index: Option<u32>,
    /// `v_p((Z_p[S] : mu(C''_F)))` from the semi-local generators.
    pub semilocal_index: Option<u32>,
    pub v_h: u32,
    pub v_regulator: RegulatorValuation,
    pub v_kappa: u32,
    pub r1: u32,
    /// `v(kappa) + v(h) + v(R) + 1 - r1`.
    pub predicted: i64,
    pub holds: bool,
}

/// Index of the `G`-module spanned by the semi-local generators in `Z_p[S]`.
pub fn semilocal_index(ambient: &Arc<AbelianFieldSpec>, place: &Place, guard: u32) -> Result<IndexValuation> {
    let vectors = solomon::semilocal_generators(ambient, place)?;
    let prec = vectors.iter().flat_map(|v| v.entries.iter().map(|e| e.precision())).min().unwrap();
    let elems: Vec<GroupRingElement> = vectors
        .iter()
        .map(|v| {
            let c = v.entries.iter().map(|e| e.rational_value()).collect::<Result<Vec<_>>>()?;
            GroupRingElement::from_coeffs(ambient, place.p(), prec, c)
        })
        .collect::<Result<_>>()?;
    Ok(groupring::ideal_basis(&elems)?.index_valuation(guard))
}

/// Compares `v_p` of the index of `Sol_1(F)` with
/// `v(kappa) + v(h) + v(R^Leop) + 1 - r1`.
pub fn index_formula_check(
    ambient: &Arc<AbelianFieldSpec>,
    place: &Place,
    class_number: u64,
    kappa: u64,
    regulator: RegulatorValuation,
    guard: u32,
) -> Result<IndexFormulaOutcome> {
    let p = place.p();
    let (sol1, _) = solomon::sol_ideal(ambient, place, solomon::SolVariant::One)?;
    let sol_index = sol1.index_valuation(guard).finite();
    let semi = semilocal_index(ambient, place, guard)?.finite();
    let v_h = arith::val_u128(class_number as u128, p);
    let v_kappa = arith::val_u128(kappa as u128, p);
    let r1 = ambient.degree() as u32;
    let predicted = v_kappa as i64 + v_h as i64 + regulator.in_is as i64 + 1 - r1 as i64;
    let holds = sol_index.map(|v| v as i64) == Some(predicted) && semi.map(|v| v as i64) == Some(predicted);
    Ok(IndexFormulaOutcome {
        sol_index,
        semilocal_index: semi,
        v_h,
        v_regulator: regulator,
        v_kappa,
        r1,
        predicted,
        holds,
    })
}
