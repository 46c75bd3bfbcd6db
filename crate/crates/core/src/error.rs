use thiserror::Error;

/// Errors produced by instance construction, parsing, generation, and solving.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    /// Exact DP refused the instance; callers should fall back to local search.
    #[error("instance with n={n} exceeds the exact-solver limit of {max} nodes; use local search")]
    SizeLimit { n: usize, max: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
