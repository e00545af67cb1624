use thiserror::Error;

/// Errors produced by the library. Validation details that are not hard
/// errors live in [`crate::paths::ValidationReport`] instead.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("partition parts must be positive, got {0}")]
    NonPositivePart(i64),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid sequence at index {index}: {reason}")]
    InvalidSequence { index: usize, reason: String },
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("degree {degree} exceeds series bound {bound}")]
    DegreeOutOfRange { degree: usize, bound: usize },
    #[error("mismatched series bounds {0} and {1}")]
    BoundMismatch(usize, usize),
    #[error("composition requires a zero constant term")]
    NonzeroConstantTerm,
}

pub type Result<T> = std::result::Result<T, Error>;
