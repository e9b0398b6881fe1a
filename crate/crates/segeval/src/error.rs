//! Error type shared across the crate.

use std::path::PathBuf;

/// Errors produced while loading inputs or running the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Reading or writing a file failed.
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The file is not in a supported format, or uses an unsupported
    /// variant of one (bit depth, channel count, magic number).
    #[error("format error in {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    /// A text format (`.seg`, CSV) failed to parse. `line` is 1-based.
    #[error("parse error in {path} at line {line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    /// Two inputs that must agree on dimensions do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An argument violates an operation's contract.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The input is degenerate for the requested statistic
    /// (empty mask, zero variance).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
