use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid quantization range [{lo}, {hi}] with {bins} bins")]
    InvalidRange { lo: f64, hi: f64, bins: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid block order: {0}")]
    InvalidOrder(String),

    #[error("infeasible exact computation: {0}")]
    Infeasible(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
