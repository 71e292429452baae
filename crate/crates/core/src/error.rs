use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("operator is not hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace {0:.12} differs from one")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation unsafe: {0}")]
    Truncation(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("grid inadequate: {0}")]
    Grid(String),

    #[error("state file: {0}")]
    StateFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
