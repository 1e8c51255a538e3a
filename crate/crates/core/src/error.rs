use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the classifiers, the evaluation harness and the loaders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate edge: endpoints coincide")]
    DegenerateEdge,

    #[error("degenerate value range: min {min} is not below max {max}")]
    DegenerateRange { min: f64, max: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed result record: {0}")]
    Record(String),
}

impl Error {
    /// True for errors caused by the input data rather than by the
    /// requested configuration.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Validation(_) | Error::Io { .. } | Error::Record(_)
        )
    }

    /// True for errors caused by an invalid configuration or parameter value.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config(_) | Error::InvalidParameter(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
