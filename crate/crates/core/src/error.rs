use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// A computed object violated an internal invariant (PSD, marginals, ζ range).
    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid sweep configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
