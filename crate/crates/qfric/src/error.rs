use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero separation: Green tensor is singular at r = 0")]
    ZeroSeparation,
    #[error("order {0} has no closed form (use the numeric path)")]
    UnsupportedOrder(usize),
    #[error("finite-difference step {step:e} underflows relative to |r| = {scale:e}")]
    StepUnderflow { step: f64, scale: f64 },
    #[error("sample set is degenerate (rank {rank} < {needed})")]
    DegenerateSamples { rank: usize, needed: usize },
    #[error("derivative order {0} must be odd")]
    EvenOrder(usize),
    #[error("quadrature did not converge: error estimate {err:e} vs value {value:e}")]
    QuadratureNoConvergence { value: f64, err: f64 },
    #[error("regime violation: {0}")]
    RegimeViolation(String),
    #[error("negative lag {0}")]
    NegativeLag(f64),
    #[error("correlation factor has order {got}, expected {expected}")]
    OrderMismatch { expected: usize, got: usize },
    #[error("no correlation factor supplied for order {0}")]
    MissingOrder(usize),
    #[error("history window too short: {have} < {need}")]
    WindowTooShort { have: f64, need: f64 },
    #[error("trajectory is not scattering: {0}")]
    NotScattering(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
