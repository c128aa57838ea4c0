//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("box ({0}, {1}) is not removable")]
    NotRemovable(usize, usize),
    #[error("box ({0}, {1}) is not addable")]
    NotAddable(usize, usize),
    #[error("dimension mismatch: {0}")]
    ShapeMismatch(String),
    #[error("negative transition weight at row {row}, column {col}")]
    NegativeEntry { row: String, col: String },
    #[error("rescaling function is not positive at state {0}")]
    NonPositiveEta(String),
    #[error("rescaling function is not harmonic at state {0}")]
    NotHarmonic(String),
    #[error("invalid operator spec: {0}")]
    InvalidSpec(String),
    #[error("operator image leaves the invariant span at {0}")]
    ImageLeavesSpan(String),
    #[error("lumping error: {0}")]
    Lumping(String),
    #[error("fiber map mismatch: {0}")]
    BasisMismatch(String),
    #[error("unknown chain: {0}")]
    UnknownChain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
