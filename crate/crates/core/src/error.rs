use thiserror::Error;

use crate::overlap::Cell;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inconsistent retrieval counts: corrected cell {cell} = {value} is negative")]
    NegativeCell { cell: Cell, value: i128 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("empty universe: no documents to form a distribution")]
    EmptyUniverse,

    #[error("universe total {total} is smaller than the sector union {union}")]
    UniverseTooSmall { total: u64, union: u64 },

    #[error("row {row}, column {column}: {message}")]
    Parse { row: usize, column: String, message: String },

    #[error("invalid record: {0}")]
    Invalid(String),

    #[error("duplicate record key {0}")]
    DuplicateKey(String),

    #[error("no T(UIG) value for {0}")]
    MissingValue(String),

    #[error("series share no windows")]
    NoOverlap,

    #[error("{key}: {reason}")]
    PayloadUnavailable { key: String, reason: String },

    #[error("country must not be empty")]
    EmptyCountry,

    #[error("invalid year range {start}-{end}")]
    InvalidYearRange { start: i32, end: i32 },
}

impl Error {
    pub(crate) fn parse(row: usize, column: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { row, column: column.into(), message: message.into() }
    }
}
