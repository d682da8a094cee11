use std::fmt;

use num_integer::Integer;

use crate::arith::isqrt_u64;
use crate::error::{Error, Result};

use super::FundamentalDiscriminant;

/// The integral binary quadratic form `a x^2 + b x y + c y^2`.
///
/// Field order gives the lexicographic ordering used to pick canonical
/// representatives of indefinite classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// `b^2 - 4ac`, exact.
    pub fn discriminant(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// The opposite form `(a, -b, c)`.
    pub fn opposite(&self) -> Self {
        Self::new(self.a, -self.b, self.c)
    }

    /// The form with the smallest admissible leading coefficient 1 (identity).
    pub fn principal(d: &FundamentalDiscriminant) -> Self {
        let b = d.parity();
        Self::new(1, b, (b * b - d.value()) / 4)
    }

    /// A form of leading coefficient -1; its narrow class has norm -1.
    pub(crate) fn negative_principal(d: &FundamentalDiscriminant) -> Self {
        let b = d.parity();
        Self::new(-1, b, (d.value() - b * b) / 4)
    }

    fn check(&self, d: &FundamentalDiscriminant) -> Result<()> {
        if self.discriminant() != d.value() as i128 {
            return Err(Error::WrongDiscriminant {
                a: self.a,
                b: self.b,
                c: self.c,
                expected: d.value(),
            });
        }
        if !self.is_primitive() {
            return Err(Error::NotPrimitive {
                a: self.a,
                b: self.b,
                c: self.c,
            });
        }
        if d.value() < 0 && self.a <= 0 {
            return Err(Error::NotPositiveDefinite {
                a: self.a,
                b: self.b,
                c: self.c,
            });
        }
        Ok(())
    }

    /// True when the form is reduced in the sense used for its discriminant
    /// sign: `|b| <= a <= c` with the boundary convention for `D < 0`, and
    /// `0 < b < sqrt D`, `sqrt D - b < 2|a| < sqrt D + b` for `D > 0`.
    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        let (a, b, c) = (self.a, self.b, self.c);
        if d < 0 {
            a > 0
                && b.abs() <= a
                && a <= c
                && (b >= 0 || (b.abs() != a && a != c))
        } else {
            let s = isqrt_u64(d as u64) as i64;
            let two_a = 2 * a.abs();
            b > 0 && b <= s && s - b < two_a && two_a <= s + b
        }
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Reduces `f` within its proper equivalence class.
///
/// For `D < 0` the result is the unique reduced representative. For `D > 0`
/// it is some reduced form on the rho-cycle of `f`; use
/// [`FormClassGroup::class_of`](super::FormClassGroup::class_of) for a
/// canonical answer.
pub fn reduce(f: QuadraticForm, d: &FundamentalDiscriminant) -> Result<QuadraticForm> {
    f.check(d)?;
    reduce_unchecked(Wide::from(f), d.value() as i128)
}

/// Gauss (Dirichlet) composition of two forms of discriminant `D`.
///
/// Both inputs are reduced first so intermediates stay bounded by `D^2`;
/// the result is the reduced composite.
pub fn compose_forms(
    f: QuadraticForm,
    g: QuadraticForm,
    d: &FundamentalDiscriminant,
) -> Result<QuadraticForm> {
    let f = reduce(f, d)?;
    let g = reduce(g, d)?;
    compose_reduced(f, g, d.value() as i128)
}

/// Composition followed by reduction.
pub(crate) fn compose_reduced(
    f: QuadraticForm,
    g: QuadraticForm,
    disc: i128,
) -> Result<QuadraticForm> {
    let w = compose_wide(Wide::from(f), Wide::from(g), disc)?;
    reduce_unchecked(w, disc)
}

/// One application of the rho operator to an indefinite form.
pub fn rho(f: QuadraticForm) -> Result<QuadraticForm> {
    let d = f.discriminant();
    debug_assert!(d > 0);
    let s = isqrt_u64(d as u64) as i128;
    rho_wide(Wide::from(f), d, s).narrow("applying rho")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Wide {
    a: i128,
    b: i128,
    c: i128,
}

impl From<QuadraticForm> for Wide {
    fn from(f: QuadraticForm) -> Self {
        Self {
            a: f.a as i128,
            b: f.b as i128,
            c: f.c as i128,
        }
    }
}

impl Wide {
    fn narrow(self, what: &'static str) -> Result<QuadraticForm> {
        let conv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow(what));
        Ok(QuadraticForm::new(conv(self.a)?, conv(self.b)?, conv(self.c)?))
    }
}

pub(crate) fn reduce_unchecked(mut f: Wide, disc: i128) -> Result<QuadraticForm> {
    if disc < 0 {
        loop {
            normalize_definite(&mut f, disc);
            if f.a > f.c {
                f = Wide {
                    a: f.c,
                    b: -f.b,
                    c: f.a,
                };
                continue;
            }
            break;
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        f.narrow("reducing")
    } else {
        let s = isqrt_u64(disc as u64) as i128;
        while !is_reduced_indefinite(f, s) {
            f = rho_wide(f, disc, s);
        }
        f.narrow("reducing")
    }
}

fn normalize_definite(f: &mut Wide, disc: i128) {
    let a = f.a;
    let b = (f.b + a - 1).rem_euclid(2 * a) - a + 1;
    f.b = b;
    f.c = (b * b - disc) / (4 * a);
}

fn is_reduced_indefinite(f: Wide, s: i128) -> bool {
    let two_a = 2 * f.a.abs();
    f.b > 0 && f.b <= s && s - f.b < two_a && two_a <= s + f.b
}

/// `(a, b, c) -> (c, r, (r^2 - D) / 4c)` with `r = -b mod 2c` normalized
/// into `(-|c|, |c|]` when `|c| > sqrt D` and into `(sqrt D - 2|c|, sqrt D)`
/// otherwise.
fn rho_wide(f: Wide, disc: i128, s: i128) -> Wide {
    let c_abs = f.c.abs();
    let m = 2 * c_abs;
    let low = if c_abs > s { -c_abs } else { s - m };
    // first admissible value is low + 1
    let r = low + 1 + (-f.b - (low + 1)).rem_euclid(m);
    Wide {
        a: f.c,
        b: r,
        c: (r * r - disc) / (4 * f.c),
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// `a3 = a1 a2 / e^2`, `b3 = (u a1 b2 + v a2 b1 + w (b1 b2 + D) / 2) / e`
/// where `e = gcd(a1, a2, (b1 + b2) / 2) = u a1 + v a2 + w (b1 + b2) / 2`.
fn compose_wide(f: Wide, g: Wide, disc: i128) -> Result<Wide> {
    let half_sum = (f.b + g.b) / 2;
    let (e1, x1, y1) = ext_gcd(f.a, g.a);
    let (e, x2, w) = ext_gcd(e1, half_sum);
    let (u, v) = (x2 * x1, x2 * y1);

    let a3 = (f.a / e) * (g.a / e);
    let m = 2 * a3.abs();
    // reduce each term modulo 2 e |a3| before dividing by e to stay in range
    let big = m * e;
    let half_prod = (f.b * g.b + disc) / 2;
    let t1 = (u.rem_euclid(big) * ((f.a * g.b).rem_euclid(big))).rem_euclid(big);
    let t2 = (v.rem_euclid(big) * ((g.a * f.b).rem_euclid(big))).rem_euclid(big);
    let t3 = (w.rem_euclid(big) * half_prod.rem_euclid(big)).rem_euclid(big);
    let num = (t1 + t2 + t3).rem_euclid(big);
    if num % e != 0 {
        return Err(Error::Internal(format!(
            "composition numerator not divisible by gcd {e}"
        )));
    }
    let b3 = num / e;
    let numer = b3 * b3 - disc;
    if numer % (4 * a3) != 0 {
        return Err(Error::Internal(
            "composition produced a non-integral third coefficient".into(),
        ));
    }
    Ok(Wide {
        a: a3,
        b: b3,
        c: numer / (4 * a3),
    })
}
