use thiserror::Error;

/// Errors raised by the algebra, fuzzy-norm and series layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A numeric argument fell outside its admissible range.
    #[error("domain error: {field} = {value} ({reason})")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Elements from different models, or payloads of the wrong shape.
    #[error("structural error: {0}")]
    Structural(String),

    /// The operation is not defined for this model kind.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A tabulated operation or model description is malformed.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A series failed to converge; carries the norms of the last terms seen.
    #[error("series diverged after {terms} terms (last term norm {last_norm:e})")]
    Diverged {
        terms: usize,
        last_norm: f64,
        trace: Vec<f64>,
    },

    /// A precondition on an element failed (e.g. centre of a probe is not invertible).
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            field,
            value,
            reason,
        }
    }
}

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

pub type Result<T> = std::result::Result<T, Error>;
