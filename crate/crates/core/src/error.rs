use thiserror::Error;

/// Errors raised by the algebra, polynomial and kernel layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported dimension {0} (expected 1..={max})", max = crate::clifford::MAX_DIM)]
    UnsupportedDimension(usize),
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected a grade-1 element")]
    NotAVector,
    #[error("zero vector has no inverse")]
    ZeroVector,
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("factor {0} is not a unit vector and normalization is disabled")]
    NonUnitFactor(usize),
    #[error("polynomial is not divisible by |.|^2 (remainder has {remainder_terms} terms)")]
    NotDivisible { remainder_terms: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("evaluation at the radial singularity")]
    Singular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid Vahlen matrix: {0}")]
    InvalidVahlen(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-finite value in numerical evaluation")]
    NonFinite,
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
