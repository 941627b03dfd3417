use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid measurement: {0}")]
    InvalidPovm(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("degenerate measurement: t·p = {0} is not positive")]
    DegenerateMeasurement(f64),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True when the error stems from user input rather than a runtime
    /// invariant violation.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Consistency(_) | Error::DegenerateMeasurement(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
