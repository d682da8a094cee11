//! Brute-force oracles shared by the integration suites. None of them call
//! into the form engine or the Hilbert symbol formulas they check.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use ambiclass::arith::kronecker;

pub fn isqrt(n: i64) -> i64 {
    assert!(n >= 0);
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && isqrt(n).pow(2) == n
}

pub fn trial_is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Fundamental discriminant test by trial division.
pub fn is_fundamental(d: i64) -> bool {
    let squarefree = |m: i64| {
        let m = m.abs();
        m != 0 && (2..).take_while(|k| k * k <= m).all(|k| m % (k * k) != 0)
    };
    match d.rem_euclid(4) {
        1 => d != 1 && squarefree(d),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree(d / 4),
        _ => false,
    }
}

/// Legendre symbol by listing the nonzero squares mod an odd prime.
pub fn legendre_by_squares(a: i64, p: i64) -> i8 {
    let r = a.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    if (1..p).any(|x| (x * x) % p == r) {
        1
    } else {
        -1
    }
}

fn strip_square_powers(mut a: i64, p: i64) -> i64 {
    while a % (p * p) == 0 {
        a /= p * p;
    }
    a
}

/// Local solvability of `z^2 = a x^2 + b y^2` over `Q_p` by searching
/// primitive solutions modulo `p^k`.
///
/// After removing square factors of `p` from `a` and `b`, a primitive
/// solution has some unit coordinate. Scaling that coordinate to 1 leaves a
/// two-variable search, and Hensel's lemma lifts any solution modulo
/// `p^(2 delta + 1)`, where `delta` is the valuation of the partial derivative
/// in the unit coordinate (`2z`, `2ax` or `2by`).
pub fn hilbert_by_search(a: i64, b: i64, p: i64) -> i8 {
    let a = strip_square_powers(a, p);
    let b = strip_square_powers(b, p);
    let v = |n: i64| {
        let mut n = n;
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        k
    };
    let v2 = if p == 2 { 1 } else { 0 };
    let modulus = |delta: u32| p.pow(2 * delta + 1);

    // z = 1: a x^2 + b y^2 = 1
    let m = modulus(v2);
    let by2: HashSet<i64> = (0..m).map(|y| (b * y * y).rem_euclid(m)).collect();
    if (0..m).any(|x| by2.contains(&(1 - a * x * x).rem_euclid(m))) {
        return 1;
    }
    // x = 1: a + b y^2 = z^2
    let m = modulus(v2 + v(a));
    let squares: HashSet<i64> = (0..m).map(|z| (z * z).rem_euclid(m)).collect();
    if (0..m).any(|y| squares.contains(&(a + b * y * y).rem_euclid(m))) {
        return 1;
    }
    // y = 1: a x^2 + b = z^2
    let m = modulus(v2 + v(b));
    let squares: HashSet<i64> = (0..m).map(|z| (z * z).rem_euclid(m)).collect();
    if (0..m).any(|x| squares.contains(&(a * x * x + b).rem_euclid(m))) {
        return 1;
    }
    -1
}

/// Real solvability of `z^2 = a x^2 + b y^2`: try the coordinate vectors.
pub fn hilbert_real(a: i64, b: i64) -> i8 {
    if a > 0 || b > 0 {
        1
    } else {
        -1
    }
}

/// `h(D)` for `D < 0` from Dirichlet's class number formula
/// `h = -(w / 2|D|) sum_{a=1}^{|D|-1} (D|a) a`.
pub fn dirichlet_class_number(d: i64) -> u64 {
    assert!(d < 0);
    let n = -d;
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let s: i64 = (1..n).map(|a| kronecker(d, a) as i64 * a).sum();
    let h = -(w * s);
    assert!(h > 0 && h % (2 * n) == 0, "D = {d}");
    (h / (2 * n)) as u64
}

/// Reduced definite forms of discriminant `D < 0`, by brute force over `a`, `b`.
pub fn reduced_definite_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for a in 1..=isqrt(-d) {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && (b == -a || c == a)) {
                continue;
            }
            out.push((a, b, c));
        }
    }
    out
}

/// Number of 2-torsion classes for `D < 0`: reduced forms with `b = 0`,
/// `b = a` or `a = c` are exactly the classes equal to their opposite.
pub fn definite_two_torsion(d: i64) -> u64 {
    reduced_definite_forms(d)
        .into_iter()
        .filter(|&(a, b, c)| b == 0 || b == a || a == c)
        .count() as u64
}

/// Zagier-reduced forms `a > 0, c > 0, b > a + c` of discriminant `D > 0`.
///
/// With `k = a - c`, `(b - a - c)(b + a + c) = D - k^2`, so enumerating the
/// factorizations of `D - k^2` lists them all.
pub fn zagier_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut k = -isqrt(d);
    while k * k < d {
        let m = d - k * k;
        let mut u = 1;
        while u * u < m {
            if m % u == 0 {
                let w = m / u;
                if (u + w) % 2 == 0 {
                    let b = (u + w) / 2;
                    let s = (w - u) / 2;
                    if (s + k) % 2 == 0 {
                        let a = (s + k) / 2;
                        let c = (s - k) / 2;
                        if a > 0 && c > 0 {
                            out.push((a, b, c));
                        }
                    }
                }
            }
            u += 1;
        }
        k += 1;
    }
    out
}

/// Zagier's reduction step `(a, b, c) -> (c, 2nc - b, a - bn + cn^2)` with
/// `n = ceil((b + sqrt D) / 2c)`; it permutes the Zagier-reduced forms.
fn zagier_step(f: (i64, i64, i64), d: i64) -> (i64, i64, i64) {
    let (a, b, c) = f;
    let s = isqrt(d);
    let n = (b + s) / (2 * c) + 1;
    (c, 2 * n * c - b, a - b * n + c * n * n)
}

/// Cycles of Zagier-reduced forms; each is one narrow class.
pub fn zagier_cycles(d: i64) -> Vec<Vec<(i64, i64, i64)>> {
    let forms = zagier_forms(d);
    let set: HashSet<_> = forms.iter().copied().collect();
    let mut seen = HashSet::new();
    let mut cycles = Vec::new();
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut g = f;
        loop {
            assert!(set.contains(&g), "Zagier step left the reduced set at {g:?}");
            seen.insert(g);
            cycle.push(g);
            g = zagier_step(g, d);
            if g == f {
                break;
            }
        }
        cycles.push(cycle);
    }
    cycles
}

/// `h+(D)` for `D > 0` as the number of Zagier cycles.
pub fn zagier_narrow_class_number(d: i64) -> u64 {
    zagier_cycles(d).len() as u64
}

/// Narrow classes equal to their opposite. The opposite class of `(a, b, c)`
/// contains `(c, b, a)`, which is again Zagier-reduced.
pub fn zagier_narrow_two_torsion(d: i64) -> u64 {
    let cycles = zagier_cycles(d);
    let mut id = HashMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for &f in c {
            id.insert(f, i);
        }
    }
    cycles
        .iter()
        .enumerate()
        .filter(|(i, c)| {
            let (a, b, cc) = c[0];
            id[&(cc, b, a)] == *i
        })
        .count() as u64
}

/// Sign of the norm of the fundamental unit, by searching the least `y > 0`
/// with `D y^2 - 4` or `D y^2 + 4` a square.
pub fn unit_norm_by_search(d: i64, max_y: i64) -> Option<i8> {
    for y in 1..=max_y {
        let t = d * y * y;
        if is_square(t - 4) {
            return Some(-1);
        }
        if is_square(t + 4) {
            return Some(1);
        }
    }
    None
}

/// Every fundamental discriminant in the closed range.
pub fn fundamental_in(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).filter(|&d| is_fundamental(d)).collect()
}
