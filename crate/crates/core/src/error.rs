use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid space parameters: {0}")]
    InvalidSpace(String),

    #[error("operation requires {required}, got {actual}")]
    UnsupportedExponent { required: &'static str, actual: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "quadrature did not reach tolerance {tol:e} within {subdivisions} subdivisions (error estimate {estimate:e})"
    )]
    QuadratureBudget { tol: f64, subdivisions: usize, estimate: f64 },

    #[error("power iteration did not converge after {iterations} iterations (last relative change {change:e})")]
    PowerIteration { iterations: usize, change: f64 },

    #[error("extrapolation refused: {0}")]
    Extrapolation(String),

    #[error("probe requires certified norms: {0}")]
    Uncertified(String),
}

pub type Result<T> = std::result::Result<T, Error>;
