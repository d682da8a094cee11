//! Exact integer kernels: deterministic primality, factorization and the
//! Kronecker symbol.
//!
//! Everything here works on 64-bit inputs with 128-bit intermediates, so no
//! product of two in-range values can overflow.

use crate::error::{Error, Result};
use num_integer::Integer;

/// Witnesses making Miller-Rabin deterministic for every `n < 2^64`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic primality test, exact on the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 97 * 97 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: i64,
    sign: i8,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> i64 {
        self.value
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Recomputes `sign * prod p^e` in 128-bit arithmetic.
    pub fn product(&self) -> i128 {
        let magnitude = self
            .factors
            .iter()
            .fold(1i128, |acc, &(p, e)| acc * (p as i128).pow(e));
        self.sign as i128 * magnitude
    }
}

/// Factors `n` by trial division over small primes, then Pollard-Brent rho
/// on whatever composite cofactor is left.
pub fn factorize(n: i64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroFactorization);
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    let mut primes = Vec::new();

    for &p in &SMALL_PRIMES {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
    }
    // cheap second pass of trial division before switching to rho
    let mut d = 101u64;
    while m > 1 && d <= 10_000 && d * d <= m {
        while m % d == 0 {
            primes.push(d);
            m /= d;
        }
        d += 2;
    }
    if m > 1 {
        split_large(m, &mut primes);
    }

    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization {
        value: n,
        sign,
        factors,
    })
}

fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    let r = isqrt_u64(m);
    if r * r == m {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    let mut c = 1;
    loop {
        if let Some(f) = pollard_brent(m, c) {
            split_large(f, out);
            split_large(m / f, out);
            return;
        }
        c += 1;
    }
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    const BLOCK: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BLOCK.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BLOCK;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Floor of the square root.
pub fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = isqrt_u64(n as u64);
        r * r == n as u64
    }
}

/// The Kronecker symbol `(a | n)`.
///
/// Conventions: `(a | 0)` is 1 when `a = ±1` and 0 otherwise, `(a | -1)` is
/// the sign of `a`, and `(a | 2)` depends on `a mod 8`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n_abs = n.unsigned_abs();
    if n < 0 && a < 0 {
        result = -1;
    }
    let tz = n_abs.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        n_abs >>= tz;
    }
    // Jacobi symbol for odd positive modulus
    let mut m = n_abs;
    let mut x = a.rem_euclid(m as i64) as u64;
    while x != 0 {
        let t = x.trailing_zeros();
        x >>= t;
        if t % 2 == 1 && (m % 8 == 3 || m % 8 == 5) {
            result = -result;
        }
        if x % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut x, &mut m);
        x %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// Exact `p`-adic valuation of a nonzero integer together with its unit part.
pub(crate) fn split_valuation(mut n: i128, p: u64) -> (u32, i128) {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}
