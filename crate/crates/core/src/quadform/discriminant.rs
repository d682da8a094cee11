use std::fmt;

use crate::arith::factorize;
use crate::error::{Error, Result};

/// Default bound on `|D|` for class group construction and sweeps.
pub const DEFAULT_BOUND: u64 = 1_000_000;

/// Behaviour of the real place of Q in `K = Q(sqrt D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfiniteBehavior {
    /// `D > 0`: the real place splits into two real places of K.
    Split,
    /// `D < 0`: the real place becomes complex.
    NonSplit,
}

/// A validated fundamental discriminant together with its ramification data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FundamentalDiscriminant {
    value: i64,
    ramified: Vec<u64>,
}

impl FundamentalDiscriminant {
    /// Validates `d`; non-fundamental values are rejected, never corrected.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::NotFundamental(d));
        }
        let fact = factorize(d)?;
        let fundamental = match d.rem_euclid(4) {
            1 => fact.is_squarefree(),
            0 => {
                let m = d / 4;
                matches!(m.rem_euclid(4), 2 | 3) && factorize(m)?.is_squarefree()
            }
            _ => false,
        };
        if !fundamental {
            return Err(Error::NotFundamental(d));
        }
        Ok(Self {
            value: d,
            ramified: fact.primes().collect(),
        })
    }

    /// Like [`new`](Self::new) but also enforces `|D| <= bound`.
    pub fn with_bound(d: i64, bound: u64) -> Result<Self> {
        if d.unsigned_abs() > bound {
            return Err(Error::BoundExceeded {
                value: d.unsigned_abs(),
                bound,
            });
        }
        Self::new(d)
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    /// Primes dividing `D`, increasing.
    pub fn ramified_primes(&self) -> &[u64] {
        &self.ramified
    }

    /// Number of ramified finite primes.
    pub fn t(&self) -> u32 {
        self.ramified.len() as u32
    }

    /// Ramification index of the finite place `p`.
    pub fn ramification_index(&self, p: u64) -> u32 {
        if self.ramified.binary_search(&p).is_ok() {
            2
        } else {
            1
        }
    }

    pub fn infinite_behavior(&self) -> InfiniteBehavior {
        if self.value > 0 {
            InfiniteBehavior::Split
        } else {
            InfiniteBehavior::NonSplit
        }
    }

    pub fn is_real(&self) -> bool {
        self.value > 0
    }

    /// `D mod 2`, the parity every middle coefficient must share.
    pub(crate) fn parity(&self) -> i64 {
        self.value.rem_euclid(2)
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}
