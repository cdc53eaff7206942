use thiserror::Error;

/// Errors produced by the holonomy, phase and spectrum routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AcError {
    /// The line of charge touches the ring: cos²θ·cos²φ + sin²φ vanishes.
    #[error("singular geometry: line of charge intersects the ring at phi = {phi}, theta = {theta}")]
    SingularGeometry { phi: f64, theta: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),

    #[error("invalid integrator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Sweep parameters must be strictly increasing.
    #[error("sweep parameters are not strictly increasing at index {index}")]
    NonMonotone { index: usize },

    /// Adjacent principal phases differ by too much to pick a branch.
    #[error(
        "refine sweep: principal phase jumps by {jump:.4} rad between {from} and {to} (limit pi/2)"
    )]
    RefineSweep { from: f64, to: f64, jump: f64 },

    #[error("basis too small: {0}")]
    BasisTooSmall(String),
}

impl AcError {
    /// True for errors caused by the line of charge touching the ring.
    pub fn is_geometry(&self) -> bool {
        matches!(self, AcError::SingularGeometry { .. })
    }
}

pub type Result<T> = std::result::Result<T, AcError>;
