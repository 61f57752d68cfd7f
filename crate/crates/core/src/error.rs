use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus N must be positive")]
    ZeroModulus,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("exponent {exponent} out of range for modulus {modulus}")]
    ExponentOutOfRange { exponent: u32, modulus: u32 },
    #[error("duplicate exponent {0}")]
    DuplicateExponent(u32),
    #[error("invalid dimensions: {0}")]
    Dimension(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("column {0} is all-zero")]
    ZeroColumn(usize),
    #[error("invalid puncture set: {0}")]
    Puncture(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid shift assignment: {0}")]
    Shift(String),
    #[error("removal certificate rejected: {0}")]
    Certificate(String),
    #[error("invalid bound query: {0}")]
    Query(String),
    #[error("code dimension {dimension} exceeds cap {cap}")]
    DimensionCap { dimension: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
