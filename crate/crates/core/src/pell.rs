//! Continued fractions of the quadratic integer `omega_D` and the norm of the
//! fundamental unit read off from the period parity.

use std::collections::HashMap;

use crate::arith::isqrt_u64;
use crate::error::{Error, Result};
use crate::quadform::FundamentalDiscriminant;

/// Continued fraction expansion of `omega_D`, which is `sqrt(D/4)` when
/// `D = 0 mod 4` and `(1 + sqrt D) / 2` when `D = 1 mod 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdExpansion {
    pub discriminant: i64,
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

impl SurdExpansion {
    pub fn period_length(&self) -> usize {
        self.period.len()
    }
}

fn real_discriminant(d: &FundamentalDiscriminant) -> Result<i64> {
    if d.is_real() {
        Ok(d.value())
    } else {
        Err(Error::NotRealQuadratic(d.value()))
    }
}

/// Expands `omega_D = (P0 + sqrt D) / 2` with the exact `(P, Q)` recurrence
///
/// `a = floor((P + sqrt D) / Q)`, `P' = a Q - P`, `Q' = (D - P'^2) / Q`,
///
/// stopping at the first repeated state. States determine the tail, so the
/// detected period is minimal.
pub fn surd_expansion(d: &FundamentalDiscriminant) -> Result<SurdExpansion> {
    let disc = real_discriminant(d)? as i128;
    let s = isqrt_u64(disc as u64) as i128;
    let mut p = disc.rem_euclid(2);
    let mut q = 2i128;
    let mut seen: HashMap<(i128, i128), usize> = HashMap::new();
    let mut quotients = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p, q)) {
            let period = quotients.split_off(start);
            return Ok(SurdExpansion {
                discriminant: disc as i64,
                preperiod: quotients,
                period,
            });
        }
        seen.insert((p, q), quotients.len());
        // Q stays positive along the expansion of a number greater than 1
        debug_assert!(q > 0);
        let a = (p + s).div_euclid(q);
        quotients.push(a as u64);
        p = a * q - p;
        q = (disc - p * p) / q;
    }
}

/// Norm of the fundamental unit of the maximal order: `-1` iff the period
/// of `omega_D` is odd.
pub fn fundamental_unit_norm(d: &FundamentalDiscriminant) -> Result<i8> {
    let e = surd_expansion(d)?;
    Ok(if e.period_length() % 2 == 1 { -1 } else { 1 })
}
