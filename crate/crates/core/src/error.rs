use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The sampled error map has a component outside the five-operator span.
    #[error("projection residual {residual:.3e} exceeds threshold {threshold:.1e}")]
    Inconsistency { residual: f64, threshold: f64 },

    #[error(
        "Fock cutoff {cutoff} too small: leakage {leakage:.3e} exceeds {threshold:.1e}; \
         retry with cutoff {suggested}"
    )]
    CutoffTooSmall {
        cutoff: usize,
        leakage: f64,
        threshold: f64,
        suggested: usize,
    },

    /// The fixed-step integrator produced a state outside the positivity
    /// tolerance; a finer step count removes it.
    #[error(
        "eigenvalue {min_eigenvalue:.3e} below {threshold:.0e} with {steps} steps; \
         retry with {suggested_steps} steps"
    )]
    StepTooCoarse {
        steps: usize,
        min_eigenvalue: f64,
        threshold: f64,
        suggested_steps: usize,
    },

    #[error("integration failure: {0}")]
    IntegrationFailure(String),

    #[error("ratio undefined: {0}")]
    RatioUndefined(String),
}

impl Error {
    /// True for failures of numerical validity (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::InvalidArgument(_))
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
