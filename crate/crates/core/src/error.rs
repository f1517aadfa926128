use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solvers, problem builders and experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("singular system in {0}")]
    Singular(&'static str),

    /// The regularizer derivative does not exist at the given coordinate.
    #[error("regularizer derivative undefined at coordinate {index} (|x|+eps = {value})")]
    UndefinedWeight { index: usize, value: f64 },

    #[error("mu outside admissible window (discriminant {discriminant})")]
    MuOutsideWindow { discriminant: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
