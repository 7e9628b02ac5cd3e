use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands live in rings (or maps) of different arity.
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },

    /// Input outside the mathematical domain of an operation (zero polynomial, degree 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The two components share a factor, so their resultant vanishes identically.
    #[error("resultant vanishes identically: components share a common factor")]
    CommonFactor,

    #[error("specialization is identically zero")]
    DegenerateSpecialization,

    /// A result that would contradict a theorem the computation relies on.
    #[error("anomaly: {0}")]
    Anomaly(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
