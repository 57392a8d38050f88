use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The integrator produced a non-finite value.
    #[error("integration error at t = {time}: {reason}")]
    Integration { time: f64, reason: String },

    /// A Moebius element hit its pole.
    #[error("singular transformation at gamma = {gamma}")]
    Singularity { gamma: Complex64 },

    /// The round-trip map left the perturbative regime.
    #[error("unstable iteration at round trip {step}: |g| = {magnitude}")]
    Instability { step: usize, magnitude: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
