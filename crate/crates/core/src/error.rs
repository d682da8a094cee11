use thiserror::Error;

/// Errors raised by the arithmetic kernels, the form engine and the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot factor zero")]
    ZeroFactorization,

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("|D| = {value} exceeds the configured bound {bound}")]
    BoundExceeded { value: u64, bound: u64 },

    #[error("form ({a}, {b}, {c}) does not have discriminant {expected}")]
    WrongDiscriminant { a: i64, b: i64, c: i64, expected: i64 },

    #[error("form ({a}, {b}, {c}) is not primitive")]
    NotPrimitive { a: i64, b: i64, c: i64 },

    #[error("form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },

    #[error("coefficient overflow while {0}")]
    Overflow(&'static str),

    #[error("{0} is not a valid place (expected a prime or infinity)")]
    InvalidPlace(String),

    #[error("expected a positive discriminant, got {0}")]
    NotRealQuadratic(i64),

    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
