use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not unitary: ||U U* - I||_F = {defect:e} exceeds {tol:e}")]
    UnitarityViolation { defect: f64, tol: f64 },

    #[error("matrix is not Hermitian: ||H - H*||_F = {defect:e} exceeds {tol:e}")]
    HermiticityViolation { defect: f64, tol: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid norm spec: {0}")]
    InvalidNormSpec(String),

    #[error("vector length {got} does not match norm dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("premise of the transfer check failed: {0}")]
    TransferPremise(String),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
