use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid matrix data: {0}")]
    InvalidMatrix(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("SVD did not converge after {sweeps} Jacobi sweeps")]
    SvdNonConvergence { sweeps: usize },

    #[error("numerically singular block: {0}")]
    SingularBlock(String),

    #[error("{operand} is not a group matrix (index {index} exceeds 1)")]
    NotGroupMatrix { operand: String, index: usize },

    #[error("predicate failed: {0}")]
    PredicateFailed(String),

    #[error("parallel sum requires at least one non-null operand")]
    BothZero,

    #[error("inconsistent generator parameters: {0}")]
    InvalidGenSpec(String),

    #[error("unknown theorem id: {0}")]
    UnknownTheorem(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn not_group(operand: impl Into<String>, index: usize) -> Self {
        Error::NotGroupMatrix {
            operand: operand.into(),
            index,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
