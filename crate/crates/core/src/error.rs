use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root not bracketed: {0}")]
    Bracket(String),

    #[error("need at least {needed} records, got {got}")]
    InsufficientSeries { needed: usize, got: usize },

    #[error("record spacing is not uniform (expected {expected}, found {found} at t = {t})")]
    NonUniformSeries { expected: f64, found: f64, t: f64 },

    #[error("no cell deviates from the background")]
    EmptyPerturbation,

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Scenario(e.to_string())
    }
}
