use thiserror::Error;

/// Errors raised by the coding, channel and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial {poly:#x} is not primitive of degree {degree}")]
    NonPrimitivePolynomial { poly: u32, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("word has no erasures to fill")]
    NoErasures,
    #[error("dimension mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    DimensionMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("decoder configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("bracket [{lo_db}, {hi_db}] dB does not straddle target BER {target}: {reason}")]
    BracketError {
        lo_db: f64,
        hi_db: f64,
        target: f64,
        reason: String,
    },
    #[error("argument outside its domain: {0}")]
    DomainError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
