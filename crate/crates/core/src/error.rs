use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum of 65536")]
    FieldTooLarge(u64),
    #[error("modulus must be monic of degree {expected} with {} coefficients", expected + 1)]
    BadModulus { expected: u32 },
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u32 },
    #[error("value {value} is not an element of GF({q})")]
    NotAnElement { value: u64, q: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no disjoint local group structure found: {0}")]
    NoGroupStructure(String),
    #[error("code has dimension 0")]
    ZeroDimension,
    #[error("position {pos} cannot be repaired locally: group partner {partner} is also erased")]
    LocalRepairBlocked { pos: usize, partner: usize },
    #[error("erasure pattern of size {0} is not uniquely recoverable")]
    Unrecoverable(usize),
    #[error("enumeration of {needed} codewords exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("conditions violated: {0}")]
    ConditionsViolated(String),
    #[error("trace replay diverged at round {round}: {reason}")]
    ReplayMismatch { round: usize, reason: String },
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
