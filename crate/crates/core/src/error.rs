use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable universe mismatch: {0}")]
    UniverseMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("evaluation at a singular point: {0}")]
    Singularity(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("subdivision budget exceeded (best estimate {estimate}, error {error:e})")]
    BudgetExceeded { estimate: num_complex::Complex<f64>, error: f64 },
    #[error("non-convergent sweep: {0}")]
    NonConvergent(String),
    #[error("ill-conditioned fit (condition number {0:e})")]
    IllConditioned(f64),
    #[error("lambda = {0} is a root of B_M; use the Laurent coefficients instead")]
    PoleAtLambda(num_complex::Complex<f64>),
    #[error("pole detected on the Laurent circle (radius {0}); choose another radius")]
    PoleOnCircle(f64),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
