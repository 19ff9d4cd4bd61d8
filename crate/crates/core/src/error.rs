use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row}: {reason}")]
    MalformedRow { row: u64, reason: String },

    #[error("{bad} malformed rows exceed the tolerance of {tolerance}; first: row {first_row}: {first_reason}")]
    TooManyBadRows {
        bad: usize,
        tolerance: usize,
        first_row: u64,
        first_reason: String,
    },

    #[error("unexpected header {found:?}, expected {expected:?}")]
    BadHeader { found: String, expected: String },

    #[error("invalid clock time {0:?}, expected HH:MM:SS")]
    BadClockTime(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot unify an empty series ({0})")]
    EmptySeries(String),

    #[error("need at least 2 eligible investors, found {0}")]
    TooFewInvestors(usize),

    #[error("investor {0} not present")]
    UnknownInvestor(String),

    #[error("session capacity exceeded: {0}")]
    Capacity(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
