//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by solvers, metrics, datasets and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The numerical content of an input is unusable (non-finite entries,
    /// asymmetric covariance, dimension mismatch, malformed data file).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A factorization degenerated (rank deficiency, zero basis).
    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    /// Embedded or on-disk data failed an integrity check.
    #[error("data integrity: {0}")]
    DataIntegrity(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn degeneracy(msg: impl Into<String>) -> Self {
        Error::Degeneracy(msg.into())
    }
}
