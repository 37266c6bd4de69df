use thiserror::Error;

/// Errors raised by the fractional operators, residual evaluators and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("invalid fractional order {0}: must be finite and > 0")]
    InvalidOrder(f64),

    #[error("unsupported order {0}: derivatives are implemented for 0 < alpha <= 1")]
    UnsupportedOrder(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("sampled functions live on different grids")]
    GridMismatch,

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid exponent {0}: power atoms require exponent > -1")]
    InvalidExponent(f64),

    #[error("t = {t} is outside the domain of the closed form (base point {a})")]
    Domain { t: f64, a: f64 },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("problem is not autonomous: {0}")]
    NotAutonomous(String),

    #[error("resampling failed: {0}")]
    Resampling(String),

    #[error("singular Jacobian at Newton iteration {iteration}; try a positive regularization")]
    SingularJacobian { iteration: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
