use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: char, rank: usize },

    #[error("input is not a root subsystem: {0}")]
    NotASubsystem(String),

    #[error("Weyl group order {order} exceeds cap {cap}")]
    OrderExceedsCap { order: u128, cap: u128 },

    #[error("orbit enumeration exceeded cap {0}")]
    OrbitCapExceeded(usize),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("series order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("coefficient index {index} out of range (order {order})")]
    CoefficientOutOfRange { index: usize, order: usize },

    #[error("series inversion requires unit constant term")]
    NonUnitConstant,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field parameters (p={p}, k={k}) exceed caps (p<={p_max}, k<={k_max})")]
    FieldTooLarge { p: u64, k: usize, p_max: u64, k_max: usize },

    #[error("mixed field or cyclotomic moduli: {0}")]
    FieldMismatch(String),

    #[error("enumeration domain of size {size} exceeds cap {cap}")]
    DomainCapExceeded { size: u128, cap: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
