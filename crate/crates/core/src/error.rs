use thiserror::Error;

/// Errors produced by the model, the analysis routines and the parsers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spin value {0} is outside 1..=3")]
    SpinOutOfRange(u8),

    #[error("depth {depth} exceeds the cap of {cap}")]
    DepthCap { depth: u32, cap: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A coupling times beta does not fit the floating-point range once exponentiated.
    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("configuration has {got} spins but the tree has {expected} vertices")]
    DomainMismatch { expected: usize, got: usize },

    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),

    /// The requested quantity is undefined for these parameters.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("point is not a fixed point (residual {0:e})")]
    NotAFixedPoint(f64),

    #[error("no change in solution count between beta = {beta_low} and beta = {beta_high}")]
    NoTransition { beta_low: f64, beta_high: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
