use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid ensemble configuration: {0}")]
    InvalidConfig(String),
    /// A request exceeded a cost guard (moment order, matrix size, bins).
    #[error("{what}: requested {requested} exceeds the limit of {limit}")]
    CostGuard {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    #[error("matrix is not symmetric (largest asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("numerical contract violated: {0}")]
    Numerical(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] sscov_core::Error),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
