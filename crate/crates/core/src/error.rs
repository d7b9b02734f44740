use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("item count mismatch: expected {expected}, found {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("item ids differ at position {position}")]
    IdOrderMismatch { position: usize },

    #[error("ids list has length {ids} but matrix has {columns} columns")]
    IdCountMismatch { ids: usize, columns: usize },

    #[error("duplicate id {0:?}")]
    DuplicateId(String),

    #[error("id {0:?} contains a forbidden character")]
    InvalidId(String),

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not orthogonal: |QᵀQ - I|_F = {deviation:e}")]
    NotOrthogonal { deviation: f64 },

    #[error("matrix is not symmetric positive semidefinite: {0}")]
    NotPsd(String),

    #[error("rank precondition violated: rank {rank} exceeds cap {cap}")]
    RankPrecondition { rank: usize, cap: usize },

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: Vec<u8> },

    #[error("unsupported dtype code {0}")]
    UnsupportedDtype(u8),

    #[error("truncated input: need {needed} bytes, have {available}")]
    Truncated { needed: u64, available: u64 },

    #[error("{0} trailing bytes after payload")]
    TrailingData(u64),

    #[error("malformed id block: {0}")]
    IdBlock(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "id sets differ: {symmetric_difference} ids in only one input (first offenders: {offenders:?})"
    )]
    PairingMismatch {
        symmetric_difference: usize,
        offenders: Vec<String>,
    },

    #[error("query {0:?} has no relevance judgments")]
    MissingQuery(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Stable machine-readable code, one per variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::CountMismatch { .. } => "count_mismatch",
            Error::IdOrderMismatch { .. } => "id_order_mismatch",
            Error::IdCountMismatch { .. } => "id_count_mismatch",
            Error::DuplicateId(_) => "duplicate_id",
            Error::InvalidId(_) => "invalid_id",
            Error::NonFinite { .. } => "non_finite",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NotOrthogonal { .. } => "not_orthogonal",
            Error::NotPsd(_) => "not_psd",
            Error::RankPrecondition { .. } => "rank_precondition",
            Error::BadMagic { .. } => "bad_magic",
            Error::UnsupportedDtype(_) => "unsupported_dtype",
            Error::Truncated { .. } => "truncated",
            Error::TrailingData(_) => "trailing_data",
            Error::IdBlock(_) => "id_block",
            Error::Parse { .. } => "parse",
            Error::PairingMismatch { .. } => "pairing_mismatch",
            Error::MissingQuery(_) => "missing_query",
            Error::Io(_) => "io",
        }
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
