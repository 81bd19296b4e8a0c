use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid NIfTI file {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("dimension mismatch: {0:?} vs {1:?}")]
    DimsMismatch([usize; 3], [usize; 3]),

    #[error("spacing mismatch: {0:?} vs {1:?}")]
    SpacingMismatch([f64; 3], [f64; 3]),

    #[error("label {0} is not part of the label scheme")]
    UnknownLabel(u8),

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("invalid volume: {0}")]
    InvalidVolume(String),

    #[error("unknown transform `{0}`")]
    UnknownTransform(String),

    #[error("transform `{0}` is already registered")]
    DuplicateTransform(String),

    #[error("invalid parameters for `{transform}`: {reason}")]
    InvalidParams { transform: String, reason: String },

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("incomplete ranking grid: {0}")]
    IncompleteGrid(String),

    #[error("ranking needs at least {needed} {what}, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("{0}")]
    Data(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn params(transform: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            transform: transform.to_string(),
            reason: reason.into(),
        }
    }

    /// True for errors raised while validating a strategy definition.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::UnknownTransform(_)
                | Error::DuplicateTransform(_)
                | Error::InvalidParams { .. }
                | Error::InvalidStrategy(_)
                | Error::UnknownPreset(_)
                | Error::UnknownLabel(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
