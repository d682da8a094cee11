//! Local norm computations over Q: Hilbert symbols at every place, the
//! everywhere-local (hence global) norm test for `Q(sqrt D)`, and the unit
//! norm index.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use crate::arith::{factorize, is_prime, kronecker, split_valuation};
use crate::error::{Error, Result};
use crate::quadform::FundamentalDiscriminant;

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => p.fmt(f),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "oo" | "∞" => Ok(Place::Infinite),
            other => {
                let p: u64 = other
                    .parse()
                    .map_err(|_| Error::InvalidPlace(other.to_string()))?;
                if is_prime(p) {
                    Ok(Place::Finite(p))
                } else {
                    Err(Error::InvalidPlace(other.to_string()))
                }
            }
        }
    }
}

/// Which class group the cycle selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cycle {
    /// No positivity condition on K: the ordinary class group.
    Ordinary,
    /// Positivity at every real place of K: the narrow class group.
    Narrow,
}

impl Cycle {
    pub fn as_str(self) -> &'static str {
        match self {
            Cycle::Ordinary => "ordinary",
            Cycle::Narrow => "narrow",
        }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A Galois-stable real cycle on K together with the cycle it induces on Q.
///
/// The induced cycle is the restriction of the chosen one plus the real
/// place of Q whenever that place does not split in K. Over an imaginary
/// field both requests collapse to the same computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycleChoice {
    requested: Cycle,
    effective: Cycle,
    base_contains_infinity: bool,
}

impl CycleChoice {
    pub fn new(requested: Cycle, d: &FundamentalDiscriminant) -> Self {
        let (effective, base_contains_infinity) = if d.is_real() {
            (requested, requested == Cycle::Narrow)
        } else {
            (Cycle::Ordinary, true)
        };
        Self {
            requested,
            effective,
            base_contains_infinity,
        }
    }

    pub fn requested(&self) -> Cycle {
        self.requested
    }

    pub fn effective(&self) -> Cycle {
        self.effective
    }

    /// True when the request was rewritten (narrow over an imaginary field).
    pub fn was_normalized(&self) -> bool {
        self.requested != self.effective
    }

    /// Whether the induced cycle on Q is `{inf}` (otherwise it is empty).
    pub fn base_contains_infinity(&self) -> bool {
        self.base_contains_infinity
    }
}

/// Square class of a nonzero rational as an integer: `n/d ~ n*d`.
fn square_class(q: Rational64) -> Result<i128> {
    if *q.numer() == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(*q.numer() as i128 * *q.denom() as i128)
}

/// The Hilbert symbol `(a, b)_v`.
pub fn hilbert_symbol(a: Rational64, b: Rational64, place: Place) -> Result<i8> {
    let a = square_class(a)?;
    let b = square_class(b)?;
    match place {
        Place::Infinite => Ok(if a < 0 && b < 0 { -1 } else { 1 }),
        Place::Finite(p) if !is_prime(p) => Err(Error::InvalidPlace(p.to_string())),
        Place::Finite(2) => Ok(hilbert_two(a, b)),
        Place::Finite(p) => Ok(hilbert_odd(a, b, p)),
    }
}

fn legendre(u: i128, p: u64) -> i8 {
    kronecker(u.rem_euclid(p as i128) as i64, p as i64)
}

/// `(-1)^(alpha beta (p-1)/2) (u|p)^beta (v|p)^alpha`.
fn hilbert_odd(a: i128, b: i128, p: u64) -> i8 {
    let (alpha, u) = split_valuation(a, p);
    let (beta, v) = split_valuation(b, p);
    let mut s: i8 = 1;
    if alpha % 2 == 1 && beta % 2 == 1 && p % 4 == 3 {
        s = -s;
    }
    if beta % 2 == 1 {
        s *= legendre(u, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(v, p);
    }
    s
}

/// `(-1)^(eps(u) eps(v) + alpha omega(v) + beta omega(u))`.
fn hilbert_two(a: i128, b: i128) -> i8 {
    let (alpha, u) = split_valuation(a, 2);
    let (beta, v) = split_valuation(b, 2);
    let eps = |x: i128| u32::from(x.rem_euclid(4) == 3);
    let omega = |x: i128| u32::from(matches!(x.rem_euclid(8), 3 | 5));
    let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn push_primes(n: i64, out: &mut Vec<Place>) -> Result<()> {
    for p in factorize(n)?.primes() {
        out.push(Place::Finite(p));
    }
    Ok(())
}

/// Every place at which `(a, b)_v` can differ from 1: infinity, 2 and the
/// primes dividing a numerator or denominator. Sorted, finite places first.
pub fn relevant_places(a: Rational64, b: Rational64) -> Result<Vec<Place>> {
    if *a.numer() == 0 || *b.numer() == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut places = vec![Place::Infinite, Place::Finite(2)];
    for x in [*a.numer(), *a.denom(), *b.numer(), *b.denom()] {
        push_primes(x, &mut places)?;
    }
    places.sort_unstable();
    places.dedup();
    Ok(places)
}

/// `(a, b)_v` at every relevant place.
pub fn hilbert_symbols(a: Rational64, b: Rational64) -> Result<Vec<(Place, i8)>> {
    relevant_places(a, b)?
        .into_iter()
        .map(|v| hilbert_symbol(a, b, v).map(|s| (v, s)))
        .collect()
}

/// Whether `q` is a norm from `Q(sqrt D)`.
///
/// By the Hasse norm theorem this holds iff `(q, D)_v = 1` at every place;
/// only infinity, 2 and the primes dividing `q` or `D` need checking.
pub fn is_global_norm(q: Rational64, d: &FundamentalDiscriminant) -> Result<bool> {
    let disc = Rational64::from_integer(d.value());
    for (_, s) in hilbert_symbols(q, disc)? {
        if s != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The index of the norms inside the cycle-positive units of Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitNormIndexResult {
    /// 1 when only `+1` is admissible, 2 for `{+1, -1}`.
    pub base_unit_group_order: u32,
    pub index: u32,
    pub minus_one_is_global_norm: bool,
}

pub fn unit_norm_index(
    d: &FundamentalDiscriminant,
    cycle: CycleChoice,
) -> Result<UnitNormIndexResult> {
    let minus_one_is_global_norm = is_global_norm(Rational64::from_integer(-1), d)?;
    let (base_unit_group_order, index) = if cycle.base_contains_infinity() {
        (1, 1)
    } else if minus_one_is_global_norm {
        (2, 1)
    } else {
        (2, 2)
    };
    Ok(UnitNormIndexResult {
        base_unit_group_order,
        index,
        minus_one_is_global_norm,
    })
}

/// Product of ramification indices over the finite places, `2^t`.
pub fn local_norm_index_product(d: &FundamentalDiscriminant) -> u64 {
    d.ramified_primes()
        .iter()
        .map(|&p| d.ramification_index(p) as u64)
        .product()
}
