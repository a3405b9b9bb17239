use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, got {actual})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary (Frobenius deviation {deviation:.3e} exceeds {tolerance:.3e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("infeasible rank configuration: {0}")]
    InfeasibleRank(String),

    #[error("generator gave up after {retries} retries: {reason}")]
    RetriesExhausted { retries: usize, reason: String },

    #[error("state is orthogonal to its image (overlap magnitude {magnitude:.3e})")]
    ZeroOverlap { magnitude: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
