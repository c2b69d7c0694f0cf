use thiserror::Error;

/// Errors raised by the hidden code sampling library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HcsError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("linear system has no solution")]
    NoSolution,

    #[error("matrix is singular")]
    Singular,

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("generator is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("{what} = {value} exceeds the cap of {cap}")]
    SizeCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("CSS condition violated: row {row} of the hardness-code parity check is not in the peakedness code")]
    CssViolation { row: usize },

    #[error("instance has no logical qubits (k = {k})")]
    NoLogicals { k: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gave up after {attempts} resampling attempts: {what}")]
    ResampleLimit { what: &'static str, attempts: usize },

    #[error("MacWilliams transform produced a non-integer coefficient at weight {weight}")]
    NonIntegerMacWilliams { weight: usize },

    #[error("syndrome {syndrome} has zero {table} probability")]
    ZeroProbability { syndrome: String, table: String },

    #[error("empty sample batch")]
    EmptyBatch,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = HcsError> = std::result::Result<T, E>;
