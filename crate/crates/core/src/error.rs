use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("empty pattern: word and cell patterns need length >= 1")]
    EmptyPattern,

    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("no unique stationary distribution: {0}")]
    NoUniqueStationary(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("calibration mismatch: {0}")]
    CalibrationMismatch(String),

    #[error("overlapping hypotheses: {0}")]
    OverlappingHypotheses(String),

    #[error("{0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
