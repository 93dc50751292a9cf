use thiserror::Error;

/// Errors raised by the solver stack.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size mismatch: expected {expected} samples, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("Padé denominator system is numerically singular (sigma = {sigma}, order = {order})")]
    SingularPadeSystem { sigma: f64, order: usize },

    #[error("Padé denominator has a repeated root near X = {root}")]
    RepeatedPoles { root: num_complex::Complex64 },

    #[error("root finder failed to converge for the Padé denominator")]
    RootsNotConverged,

    #[error("evaluation point hits pole {index} of the rational approximant")]
    PoleHit { index: usize },

    #[error("spectral multiplier vanishes at transform index {index}")]
    SpectralPole { index: usize },

    #[error("tridiagonal pivot breakdown at row {row}")]
    TridiagonalBreakdown { row: usize },

    #[error("no propagating modes (all kappa^2 <= 0)")]
    NoPropagatingModes,

    #[error("step {step} (r = {range} m): {source}")]
    AtStep { step: usize, range: f64, source: Box<Error> },

    #[error("reference field requires a range-independent environment")]
    RangeDependentEnvironment,
}

pub type Result<T> = std::result::Result<T, Error>;
