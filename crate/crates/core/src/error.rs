use thiserror::Error;

/// Errors raised by the numerical toolkit and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("inadmissible dissipation spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),

    #[error("symbol `{label}` is not finite at |xi| = {xi} (value {value})")]
    NonFiniteSymbol { label: String, xi: f64, value: f64 },

    #[error(
        "quadrature did not converge: value {value}, estimated error {error_estimate}, requested {requested}"
    )]
    QuadratureNonConvergence {
        value: f64,
        error_estimate: f64,
        requested: f64,
    },

    #[error("extrapolation did not converge: successive estimates {previous} and {current}")]
    ExtrapolationNonConvergence { previous: f64, current: f64 },

    #[error("numerical failure at t = {t}: {reason}")]
    NumericalFailure { t: f64, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
