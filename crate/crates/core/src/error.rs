use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {n} is below the minimum {min}")]
    BadDimension { n: usize, min: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (defect {defect:e}, allowed {allowed:e})")]
    NotHermitian { defect: f64, allowed: f64 },

    #[error("matrix is not positive (lambda_min {lambda_min:e}, floor {floor:e})")]
    NotPositive { lambda_min: f64, floor: f64 },

    #[error("Loewner order precondition X <= Y fails (lambda_min(Y - X) = {lambda_min:e})")]
    OrderViolated { lambda_min: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("numerical failure: {0}")]
    NumericalFailure(&'static str),
}
