use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by depth, pattern, inference, and I/O operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A coordinate, depth, or parameter was NaN or infinite.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// An empirical reference set was empty.
    #[error("empirical reference set must contain at least one point")]
    EmptyReference,

    /// A parameter violated its domain constraint.
    #[error("invalid parameter {name}: {value} ({requirement})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// Pattern order outside the supported range.
    #[error("pattern order {p} out of range (2..=8)")]
    OrderOutOfRange { p: usize },

    /// A rank vector failed the tie-aware pattern condition.
    #[error("invalid pattern {tau:?}: not a Cayley permutation")]
    InvalidPattern { tau: Vec<u8> },

    /// Input series shorter than the requested window length.
    #[error("series of length {len} too short (need at least {min})")]
    SeriesTooShort { len: usize, min: usize },

    /// The analytic-depth routine was called with an empirical reference
    /// (or vice versa).
    #[error("reference distribution {got} not supported by {operation}")]
    UnsupportedReference {
        operation: &'static str,
        got: &'static str,
    },

    /// Vectors that must share a length did not.
    #[error("length mismatch in {context}: {left} vs {right}")]
    LengthMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    /// A text record could not be parsed; `location` names the file row or
    /// label involved.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
