use thiserror::Error;

/// Errors raised by the physics and numerics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("atom height must be strictly positive, got {0}")]
    NonPositiveHeight(f64),

    #[error("transition frequency must be strictly positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("frequency must lie on the positive real or positive imaginary axis, got {re}{im:+}i")]
    UnsupportedFrequency { re: f64, im: f64 },

    #[error("perpendicular wavenumber is degenerate: frequency and in-plane wavenumber are both zero")]
    DegenerateWavenumber,

    #[error("reflection coefficients have a pole at k_par = {k_par}")]
    Pole { k_par: f64 },

    #[error(
        "quadrature did not converge on [{lower}, {upper}]: error estimate {error:e} after {intervals} subintervals"
    )]
    NonConvergence {
        lower: f64,
        upper: f64,
        error: f64,
        intervals: usize,
    },

    #[error(
        "self-consistent frequency iteration did not converge after {iterations} steps (last change {last_change:e})"
    )]
    IterationLimit { iterations: usize, last_change: f64 },

    #[error("transition {upper} -> {lower} is not a downward transition")]
    UpwardTransition { upper: usize, lower: usize },

    #[error("total decay rate of level {level} is negative ({rate:e})")]
    NegativeRate { level: usize, rate: f64 },

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
