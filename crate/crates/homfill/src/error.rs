use thiserror::Error;

/// Errors reported by chain, map and complex operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis mismatch: expected `{expected}`, found `{found}`")]
    BasisMismatch { expected: String, found: String },

    #[error("index {index} out of range for basis `{basis}` of size {size}")]
    IndexOutOfRange {
        index: usize,
        basis: String,
        size: usize,
    },

    #[error("operation undefined for the zero chain")]
    ZeroChain,

    #[error("chain is not in the kernel: image has coefficient {value} at `{target}`")]
    NotInKernel { target: String, value: String },

    #[error("degree {degree} out of range (complex has top degree {top})")]
    DegreeOutOfRange { degree: usize, top: usize },

    #[error("boundary of boundary is nonzero at degree-{degree} cell `{cell}`")]
    BoundaryViolation { degree: usize, cell: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("coefficient too large for exact search: {0}")]
    CoefficientTooLarge(String),

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
