//! Crate-wide error type.
//!
//! Recoverable failures (bad inputs, unsatisfiable preconditions, parse
//! problems, oracle budgets) are reported through [`Error`]. Cross-field
//! element arithmetic is a programming error and panics instead.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrime(u64),

    #[error("modulus {0} is not irreducible over GF({1})")]
    ReducibleModulus(String, u64),

    #[error("modulus has degree {got}, expected monic of degree {want}")]
    DegreeMismatch { want: u32, got: usize },

    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),

    #[error("encoding {enc} out of range for GF({q})")]
    EncOutOfRange { enc: u64, q: u64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("singular local recovery matrix in fiber t = {t}")]
    SingularLocalMatrix { t: u64 },

    #[error("point ({x}, {y}) is not on the curve")]
    PointNotOnCurve { x: u64, y: u64 },

    #[error("function basis is empty")]
    EmptyBasis,

    #[error("no fibers available")]
    NoFibers,

    #[error("not enough fibers: requested {requested}, only {available} available")]
    NotEnoughFibers { requested: usize, available: usize },

    #[error("divisibility violated: {0}")]
    DivisibilityViolation(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("no point set in general position found: {0}")]
    GeneralPositionFailure(String),

    #[error("fiber sum condition failed at t = {t}")]
    GammaCheckFailure { t: u64 },

    #[error("enumeration needs {needed} weight evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("optimality classification mismatch: {0}")]
    ClassificationMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
