//! Binary quadratic forms as a concrete model of the narrow and ordinary
//! class groups of `Q(sqrt D)`: enumeration, reduction, composition, the
//! Galois action and the ambiguous subgroup.

mod discriminant;
mod form;
mod group;

pub use discriminant::{FundamentalDiscriminant, InfiniteBehavior, DEFAULT_BOUND};
pub use form::{compose_forms, reduce, rho, QuadraticForm};
pub use group::{
    ambiguous_count, group_structure, invariant_factors, narrow_class_group,
    one_minus_sigma_image_order, CycleClassGroup, FormClassGroup,
};
