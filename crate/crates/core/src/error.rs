use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("brute force refused: {n} columns exceeds the cap of {cap}")]
    Capacity { n: usize, cap: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code for this error: 2 for bad input, 3 when a solver
    /// refuses the instance size, 4 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Csv(e) if e.is_io_error() => 4,
            Error::InvalidInput(_) | Error::Config(_) | Error::Json { .. } | Error::Csv(_) => 2,
            Error::Capacity { .. } => 3,
            Error::InvalidState(_) | Error::Io { .. } => 4,
        }
    }
}
