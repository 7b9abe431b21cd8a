use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by a quaternion of magnitude {magnitude:e}")]
    ZeroDivide { magnitude: f64 },

    #[error("dimension mismatch in {op}: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        op: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("starting block is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator maps {input:?} to {output:?}; it must preserve the block shape")]
    OperatorShapeMismatch {
        input: (usize, usize),
        output: (usize, usize),
    },

    #[error("Arnoldi process already broke down at step {step}")]
    ArnoldiExhausted { step: usize },

    #[error("Givens rotation requested for a zero pair at index {index}")]
    ZeroPair { index: usize },

    #[error("rotation index {index} out of range for a column of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("triangular factor is singular at diagonal entry {0}")]
    SingularDiagonal(usize),

    #[error("Krylov basis would need {required} bytes, budget is {budget}")]
    MemoryBudget { required: usize, budget: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{path}: unsupported MatrixMarket field or format `{field}`")]
    UnsupportedField { path: PathBuf, field: String },

    #[error("{path}: unsupported image format: {reason}")]
    UnsupportedFormat { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn mismatch(
        op: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    ) -> Self {
        Error::DimensionMismatch {
            op,
            expected,
            found,
        }
    }
}
