//! Word-level modular arithmetic on `u128` residues.
//!
//! Moduli are restricted to `m < 2^126` so that `a + b` never overflows.
//! Products use the native 128-bit multiply when `m < 2^64` and fall back to
//! a double-and-add loop otherwise.

pub const MAX_MODULUS_BITS: u32 = 126;

#[inline]
pub fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

#[inline]
pub fn neg_mod(a: u128, m: u128) -> u128 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

#[inline]
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        (a * b) % m
    } else {
        mul_mod_wide(a % m, b % m, m)
    }
}

fn mul_mod_wide(mut a: u128, mut b: u128, m: u128) -> u128 {
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

pub fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a unit modulo `p^k` (`m = p^k`), by Newton lifting from the
/// inverse mod `p`.
pub fn inv_mod_prime_power(a: u128, p: u64, m: u128) -> Option<u128> {
    let p128 = p as u128;
    let a = a % m;
    if a % p128 == 0 {
        return None;
    }
    let mut x = pow_mod(a % p128, p128 - 2, p128);
    let mut known = p128;
    while known < m {
        known = known.saturating_mul(known).min(m);
        // x <- x (2 - a x)
        let ax = mul_mod(a, x, m);
        x = mul_mod(x, sub_mod(2 % m, ax, m), m);
    }
    Some(x % m)
}

/// `p^k`, or `None` when it would exceed the supported modulus width.
pub fn checked_prime_power(p: u64, k: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p as u128)?;
        if acc >= (1u128 << MAX_MODULUS_BITS) {
            return None;
        }
    }
    Some(acc)
}

/// p-adic valuation of a nonzero integer.
pub fn val_u128(mut a: u128, p: u64) -> u32 {
    debug_assert!(a != 0);
    let p = p as u128;
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

/// Valuation of a residue mod `p^k`; a zero residue reports `k`.
pub fn val_mod(a: u128, p: u64, k: u32) -> u32 {
    if a == 0 {
        k
    } else {
        val_u128(a, p).min(k)
    }
}

/// Reduce a signed integer into `[0, m)`.
pub fn from_i128(a: i128, m: u128) -> u128 {
    if a >= 0 {
        (a as u128) % m
    } else {
        neg_mod(((-a) as u128) % m, m)
    }
}

/// Symmetric lift of a residue into `(-m/2, m/2]`.
pub fn to_signed(a: u128, m: u128) -> i128 {
    if a > m / 2 {
        -((m - a) as i128)
    } else {
        a as i128
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    is_probable_prime(n as u128)
}

const MR_BASES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve prime bases; deterministic below 3.3e24
/// and overwhelmingly reliable above.
pub fn is_probable_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn pollard_brent(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c: u128 = 1;
    loop {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, m, mut g, mut r, mut q) = (2u128, 128u64, 1u128, 1u64, 1u128);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    let diff = if x > y { x - y } else { y - x };
                    q = mul_mod(q, diff, n);
                }
                g = gcd_u128(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                let diff = if x > ys { x - ys } else { ys - x };
                g = gcd_u128(diff, n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Distinct prime factors of `n`, sorted.
pub fn prime_factors(n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut n = n;
    let mut d: u128 = 2;
    while d < 10_000 && d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![];
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_probable_prime(m) {
            out.push(m);
            continue;
        }
        let f = pollard_brent(m);
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Multiplicative order of `a` modulo `m` (`gcd(a, m) = 1`).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let a = a % m;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    k
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Prime factorisation of a small integer as `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    let f = factor_u64(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}
