use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building, partitioning, iterating on or
/// reading a system.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("triangular matrix is singular: diagonal entry {index} is (numerically) zero")]
    SingularTriangular { index: usize },

    #[error("row {row} of the coefficient matrix is zero")]
    ZeroRow { row: usize },

    #[error("row {row} of the tail block has zero 1-norm")]
    ZeroTailRow { row: usize },

    #[error("diagonal entry {index} of the head block is (numerically) zero")]
    ZeroDiagonal { index: usize },

    #[error("method requires m < n, got a {rows}x{cols} system")]
    NotUnderdetermined { rows: usize, cols: usize },

    #[error("method requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("no nonsingular {rows}x{rows} column subset exists")]
    RankDeficient { rows: usize },

    #[error("system is inconsistent")]
    Inconsistent,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported Matrix Market format: {0}")]
    UnsupportedFormat(String),

    #[error("line {line}: expected {expected} columns, found {found}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Fieldless mirror of [`Error`], carried inside solve reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    DimensionMismatch,
    NonFinite,
    SingularTriangular,
    ZeroRow,
    ZeroTailRow,
    ZeroDiagonal,
    NotUnderdetermined,
    NotSquare,
    RankDeficient,
    Inconsistent,
    InvalidConfig,
    Parse,
    UnsupportedFormat,
    RaggedRows,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DimensionMismatch(_) => ErrorKind::DimensionMismatch,
            Error::NonFinite { .. } => ErrorKind::NonFinite,
            Error::SingularTriangular { .. } => ErrorKind::SingularTriangular,
            Error::ZeroRow { .. } => ErrorKind::ZeroRow,
            Error::ZeroTailRow { .. } => ErrorKind::ZeroTailRow,
            Error::ZeroDiagonal { .. } => ErrorKind::ZeroDiagonal,
            Error::NotUnderdetermined { .. } => ErrorKind::NotUnderdetermined,
            Error::NotSquare { .. } => ErrorKind::NotSquare,
            Error::RankDeficient { .. } => ErrorKind::RankDeficient,
            Error::Inconsistent => ErrorKind::Inconsistent,
            Error::InvalidConfig(_) => ErrorKind::InvalidConfig,
            Error::Parse { .. } => ErrorKind::Parse,
            Error::UnsupportedFormat(_) => ErrorKind::UnsupportedFormat,
            Error::RaggedRows { .. } => ErrorKind::RaggedRows,
            Error::Io { .. } => ErrorKind::Io,
        }
    }
}

pub(crate) fn mismatch(msg: impl Into<String>) -> Error {
    Error::DimensionMismatch(msg.into())
}
