use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol index {index} out of range for alphabet of size {size}")]
    SymbolOutOfRange { index: usize, size: usize },

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("channel matrix is singular (pivot magnitude {pivot:e} below {threshold:e})")]
    SingularChannel { pivot: f64, threshold: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("denoiser set of size {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: u128, cap: usize },

    #[error("sequence of length {n} is too short for half-width k={k} (need n > 2k)")]
    SequenceTooShort { n: usize, k: usize },

    #[error("context of half-width {k} over {symbols} symbols does not fit a 128-bit key")]
    ContextTooWide { k: usize, symbols: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error("invalid base {base:?} in record {record:?} at offset {offset}")]
    InvalidBase {
        record: String,
        offset: usize,
        base: char,
    },

    #[error("empty file: {0}")]
    EmptyFile(PathBuf),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input data.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularChannel { .. } | Error::Numerical(_) | Error::CapExceeded { .. }
        )
    }
}
