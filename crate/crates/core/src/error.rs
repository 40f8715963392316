use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensionality {0}: must be at least 1")]
    InvalidDimensionality(i64),

    #[error("invalid window {left}+{right}: at least one side must be positive")]
    InvalidWindow { left: usize, right: usize },

    #[error("operation requires a {expected} store, found {found}")]
    Mode {
        expected: &'static str,
        found: &'static str,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("store is empty")]
    EmptyStore,

    #[error("{0} is undefined for these inputs")]
    Undefined(&'static str),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("{0}")]
    InvalidInput(String),

    #[error("dense oracle too large: {rows}x{cols} exceeds {limit} cells")]
    TooLarge {
        rows: usize,
        cols: usize,
        limit: usize,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
