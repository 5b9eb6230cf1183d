//! Base-`p` digit strings for `Z_p` residues, least significant digit first.
//! For `p <= 36` each digit is one character of `0-9a-z`; larger primes use
//! decimal digits separated by `.`.

use crate::error::{Error, Result};

const ALPHABET: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// The `prec` lowest base-`p` digits of `value`.
pub fn encode(value: u128, p: u64, prec: u32) -> String {
    let mut v = value;
    let p128 = p as u128;
    let digits: Vec<u128> = (0..prec)
        .map(|_| {
            let d = v % p128;
            v /= p128;
            d
        })
        .collect();
    if p <= 36 {
        digits.iter().map(|&d| ALPHABET[d as usize] as char).collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Inverse of [`encode`]: the residue and its precision (the digit count).
pub fn decode(s: &str, p: u64) -> Result<(u128, u32)> {
    let bad = |msg: String| Error::Parse { line: 0, msg };
    if p < 2 {
        return Err(bad(format!("invalid base {p}")));
    }
    let digits: Vec<u128> = if p <= 36 {
        s.chars()
            .map(|c| {
                let d = c.to_digit(36).ok_or_else(|| bad(format!("invalid digit {c:?}")))? as u128;
                if c.is_ascii_uppercase() {
                    return Err(bad(format!("invalid digit {c:?}")));
                }
                Ok(d)
            })
            .collect::<Result<_>>()?
    } else if s.is_empty() {
        Vec::new()
    } else {
        s.split('.')
            .map(|t| t.parse::<u128>().map_err(|_| bad(format!("invalid digit {t:?}"))))
            .collect::<Result<_>>()?
    };
    if let Some(&d) = digits.iter().find(|&&d| d >= p as u128) {
        return Err(bad(format!("digit {d} out of range for p = {p}")));
    }
    let prec = digits.len() as u32;
    if super::arith::checked_prime_power(p, prec).is_none() {
        return Err(bad(format!("{prec} digits exceed the supported width for p = {p}")));
    }
    let value = digits.iter().rev().fold(0u128, |acc, &d| acc * p as u128 + d);
    Ok((value, prec))
}
