//! Ambiguous class numbers of quadratic fields `K = Q(sqrt D)`.
//!
//! The number of Galois-fixed classes in the ordinary and narrow class
//! groups is counted directly on binary quadratic forms and compared with
//! the value predicted from ramification data and the unit norm index,
//! which is computed from local Hilbert symbols.

pub mod arith;
pub mod chevalley;
pub mod cli;
pub mod error;
pub mod normlocal;
pub mod pell;
pub mod quadform;

pub use chevalley::{verify, verify_with_group, ChevalleyReport};
pub use error::{Error, Result};
pub use normlocal::{Cycle, CycleChoice, Place};
pub use quadform::{FormClassGroup, FundamentalDiscriminant, QuadraticForm};
