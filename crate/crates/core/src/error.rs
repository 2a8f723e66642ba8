use thiserror::Error;

use crate::labels::Scale;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. The variants are grouped so that front ends
/// can map them onto coarse failure classes (input, validation, numerical).
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing header field `{0}`")]
    MissingHeader(&'static str),

    #[error("transcript {0} has no utterances")]
    EmptyTranscript(String),

    #[error("name `{0}` is empty after stripping titles and initials")]
    EmptyName(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("scale {scale}: {message}")]
    Scale { scale: Scale, message: String },

    #[error("rank deficient design; collinear columns: {}", .0.join(", "))]
    RankDeficient(Vec<String>),

    #[error("training diverged at epoch {epoch}: non-finite loss")]
    Diverged { epoch: usize },

    #[error("no candidate model could be trained: {0}")]
    NoCandidate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by numerical breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_) | Error::Diverged { .. } | Error::RankDeficient(_) | Error::NoCandidate(_)
        )
    }

    /// True for errors that come from reading or decoding external files.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Csv(_) | Error::Json(_))
    }
}
