use thiserror::Error;

/// Errors surfaced by the geometric and algebraic operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("point set is not full-dimensional (affine rank {rank} in dimension {dim})")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("point {0:?} is not in the lift support")]
    NotInSupport(Vec<i64>),

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unbounded domain requires an explicit window")]
    MissingWindow,

    #[error("inconsistent quasi-periodic data: {0}")]
    InconsistentLift(String),

    #[error("translate enumeration exceeded its certified window: {0}")]
    EnumerationGuard(String),

    #[error("matrix factorization error: {0}")]
    MatrixFactorization(String),

    #[error("graph error: {0}")]
    Graph(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
