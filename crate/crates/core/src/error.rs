//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by sample validation, kernel evaluation, estimation and IO.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol '{symbol}' not in alphabet")]
    SymbolNotInAlphabet { symbol: char },

    #[error("non-finite pixel at ({row}, {col})")]
    NonFinitePixel { row: usize, col: usize },

    #[error("pixel at ({row}, {col}) = {value} outside [0, 1]")]
    PixelOutOfRange { row: usize, col: usize, value: f64 },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("sample set must contain at least one sample")]
    EmptySampleSet,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("k-mer length {k} exceeds sequence length {len}")]
    KmerTooLong { k: usize, len: usize },

    #[error("coordinate {coord} out of bounds for {bounds}")]
    OutOfBounds { coord: String, bounds: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("sequence length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("kernel {kernel} cannot be applied to {operand} operands")]
    IncompatibleKernel { kernel: String, operand: String },

    #[error("label count {labels} does not match sample count {samples}")]
    LabelCountMismatch { labels: usize, samples: usize },

    #[error("conditioned set is empty: no sample matches the condition")]
    EmptyConditionedSet,

    #[error("invalid condition: {0}")]
    InvalidCondition(String),

    #[error("conditioned set has {m} member(s); at least {required} required")]
    ConditionedSetTooSmall { m: usize, required: usize },

    #[error("external predictor failed: {0}")]
    ProcessFailure(String),

    #[error("external predictor timed out after {seconds} s")]
    Timeout { seconds: f64 },

    #[error("unparseable predictor response: {line:?}")]
    UnparseableResponse { line: String },

    #[error("malformed file {path}, line {line}: {reason}")]
    MalformedFile {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("unsupported model file version {found:?} (supported: {supported})")]
    VersionMismatch { found: String, supported: String },

    #[error("motif {pattern:?} at position {position} does not fit in length {len}")]
    MotifOverflow {
        pattern: String,
        position: usize,
        len: usize,
    },

    #[error("invalid size ladder: {0}")]
    InvalidSizes(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
