use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Operand dimensions do not fit the operation.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A square matrix has no inverse over GF(2).
    #[error("matrix is singular")]
    Singular,

    /// Input violates a documented precondition (rank, RREF form, constraints, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// Non-finite or otherwise unusable decoder input.
    #[error("invalid input: {0}")]
    Input(String),

    /// A size limit would be exceeded (enumeration, brute-force ML, branch count).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A permutation offered as an automorphism changed the dynamic frozen matrix.
    #[error("automorphism violation: {0}")]
    AutomorphismViolation(String),

    /// Malformed text in one of the matrix/permutation/config formats.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
