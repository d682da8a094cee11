//! Both sides of the ambiguous class number formula for `K = Q(sqrt D)`:
//!
//! ```text
//! #Cl(K, c~)^G = #Cl(Q, c) * prod_v e(v) / ([K:Q] * [o(c)^x : o(c)^x ∩ N(K^x)])
//! ```
//!
//! The left side is counted directly on the form class group; the right side
//! uses only ramification data and Hilbert symbols.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::normlocal::{local_norm_index_product, unit_norm_index, Cycle, CycleChoice};
use crate::pell::fundamental_unit_norm;
use crate::quadform::{narrow_class_group, CycleClassGroup, FormClassGroup, FundamentalDiscriminant};

/// `[K:Q]`.
pub const DEGREE: u64 = 2;

/// Per-discriminant verification record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChevalleyReport {
    pub discriminant: FundamentalDiscriminant,
    pub cycle: CycleChoice,
    /// `#Cl(K, c~)`.
    pub class_number: u64,
    /// `#Cl(K, c~)^G`, counted.
    pub lhs_ambiguous: u64,
    /// Right-hand side of the formula.
    pub rhs_formula: u64,
    /// `#N(K, c~) = #Cl(Q, c, O) / [K:Q]`.
    pub norm_group_order: u64,
    /// `#Cl(K, c~)^(1 - sigma)`.
    pub image_order: u64,
    pub base_class_number: u64,
    pub ramification_product: u64,
    pub unit_index: u32,
    pub degree: u64,
    /// `N(epsilon)` for real fields.
    pub unit_norm_sign: Option<i8>,
    pub remark_applicable: bool,
    pub remark_holds: Option<bool>,
    pub matches: bool,
    pub note: Option<String>,
}

impl ChevalleyReport {
    /// `#Cl^G * #Cl^(1 - sigma) == #Cl`.
    pub fn exact_sequence_holds(&self) -> bool {
        self.lhs_ambiguous * self.image_order == self.class_number
    }
}

/// `#Cl(Q, c)` via `h(Q) 2^|c| / [Z^x : Z(c)^x]`; equal to 1 for both cycles.
pub fn base_class_number(cycle: CycleChoice) -> u64 {
    let class_number_q = 1u64;
    let real_places = u32::from(cycle.base_contains_infinity());
    let positive_units = if cycle.base_contains_infinity() { 1 } else { 2 };
    let unit_index = 2 / positive_units;
    class_number_q * 2u64.pow(real_places) / unit_index
}

fn exact_div(num: u64, den: u64, what: &str) -> Result<u64> {
    if den == 0 || num % den != 0 {
        return Err(Error::Internal(format!(
            "{what}: {num} is not divisible by {den}"
        )));
    }
    Ok(num / den)
}

/// Right-hand side of the formula as an exact integer.
pub fn rhs_ambiguous_number(d: &FundamentalDiscriminant, cycle: Cycle) -> Result<u64> {
    let choice = CycleChoice::new(cycle, d);
    let unit = unit_norm_index(d, choice)?;
    exact_div(
        base_class_number(choice) * local_norm_index_product(d),
        DEGREE * unit.index as u64,
        "ambiguous class number formula",
    )
}

/// `#N(K, c~)` through `#Cl(Q, c, O) / [K:Q]`, where
/// `#Cl(Q, c, O) = #Cl(Q, c) * prod e(v) / unit index`.
pub fn norm_group_order(d: &FundamentalDiscriminant, cycle: Cycle) -> Result<u64> {
    let choice = CycleChoice::new(cycle, d);
    let unit = unit_norm_index(d, choice)?;
    let ray_class_number = exact_div(
        base_class_number(choice) * local_norm_index_product(d),
        unit.index as u64,
        "order of Cl(Q, c, O)",
    )?;
    exact_div(ray_class_number, DEGREE, "norm class group order")
}

/// Outcome of the odd-image decomposition check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemarkCheck {
    pub applicable: bool,
    pub holds: Option<bool>,
}

/// When `#Cl^(1 - sigma)` is odd, checks that squaring permutes the image and
/// that `Cl` is the internal direct sum of `Cl^G` and `Cl^(1 - sigma)`.
pub fn remark_decomposition_check(group: &CycleClassGroup<'_>) -> RemarkCheck {
    let image = group.one_minus_sigma_image();
    if image.len() % 2 == 0 {
        return RemarkCheck {
            applicable: false,
            holds: None,
        };
    }
    let image_set: HashSet<usize> = image.iter().copied().collect();
    let squares: HashSet<usize> = image.iter().map(|&x| group.compose(x, x)).collect();
    let squaring_bijective = squares == image_set;

    let fixed = group.ambiguous_classes();
    let identity = group.identity();
    let trivial_intersection = fixed
        .iter()
        .all(|x| *x == identity || !image_set.contains(x));
    let orders_multiply = fixed.len() * image.len() == group.order();
    RemarkCheck {
        applicable: true,
        holds: Some(squaring_bijective && trivial_intersection && orders_multiply),
    }
}

/// Builds the full report for one discriminant, constructing its class group.
pub fn verify(d: &FundamentalDiscriminant, cycle: Cycle) -> Result<ChevalleyReport> {
    let g = narrow_class_group(d)?;
    verify_with_group(&g, cycle)
}

/// Builds the report reusing an already constructed narrow class group.
pub fn verify_with_group(narrow: &FormClassGroup, cycle: Cycle) -> Result<ChevalleyReport> {
    let d = narrow.discriminant();
    let choice = CycleChoice::new(cycle, d);
    let group = narrow.for_cycle(choice);

    let lhs = group.ambiguous_count() as u64;
    let image_order = group.one_minus_sigma_image_order() as u64;
    let unit = unit_norm_index(d, choice)?;
    let rhs = rhs_ambiguous_number(d, cycle)?;
    let norm_order = norm_group_order(d, cycle)?;
    let remark = remark_decomposition_check(&group);
    let unit_norm_sign = if d.is_real() {
        Some(fundamental_unit_norm(d)?)
    } else {
        None
    };
    let note = choice
        .was_normalized()
        .then(|| "narrow cycle normalized to ordinary: K has no real places".to_string());

    Ok(ChevalleyReport {
        discriminant: d.clone(),
        cycle: choice,
        class_number: group.order() as u64,
        lhs_ambiguous: lhs,
        rhs_formula: rhs,
        norm_group_order: norm_order,
        image_order,
        base_class_number: base_class_number(choice),
        ramification_product: local_norm_index_product(d),
        unit_index: unit.index,
        degree: DEGREE,
        unit_norm_sign,
        remark_applicable: remark.applicable,
        remark_holds: remark.holds,
        matches: lhs == rhs && lhs == norm_order,
        note,
    })
}
