use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("size mismatch: expected {expected} samples, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("rank mismatch: {0}")]
    RankMismatch(&'static str),

    #[error("time step must be positive, got {0}")]
    NonPositiveTimeStep(f64),

    #[error("CFL guard violated: dt*max|u|*max|k| = {courant:.3} >= 1")]
    CflViolation { courant: f64 },

    #[error("numerical blow-up at t = {t_last_good}: {reason}")]
    BlowUp { t_last_good: f64, reason: String },

    #[error("particle map lost monotonicity at t = {t_last_good} (index {index})")]
    MonotonicityLost { t_last_good: f64, index: usize },

    #[error("degenerate plane: Gram determinant {gram:e} below threshold {threshold:e}")]
    DegeneratePlane { gram: f64, threshold: f64 },

    #[error("spectral support {required} exceeds what the grid resolves ({available}); use a larger grid")]
    SupportOverflow { required: i64, available: i64 },

    #[error("angle between k+l and k-l undefined for k = ±l")]
    ParallelWavevectors,

    #[error("blob positions {0} and {1} coincide")]
    CoincidentBlobs(usize, usize),
}
