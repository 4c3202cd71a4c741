use thiserror::Error;

/// Errors raised by the metrology toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Fock cutoff {cutoff} too small: {population:.3e} population near the edge; use a cutoff of at least {suggested}")]
    CutoffTooSmall {
        cutoff: usize,
        population: f64,
        suggested: usize,
    },

    #[error("unsupported request: {0}")]
    Unsupported(String),

    #[error("bound is unbounded: {0}")]
    Unbounded(String),

    #[error("rate function is not unimodal on [{lo:.3e}, {hi:.3e}]; use the grid search fallback")]
    NotUnimodal { lo: f64, hi: f64 },

    #[error("outcome {outcome} has zero probability but derivative {derivative:.3e}; Fisher information diverges")]
    FisherDivergence { outcome: usize, derivative: f64 },

    #[error("probability {value:.3e} for outcome {outcome} is negative beyond clamping tolerance")]
    NegativeProbability { outcome: usize, value: f64 },

    #[error("operator is not hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("observable has zero variance on the state")]
    ZeroVariance,

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True when the request itself is physically meaningless (as opposed to
    /// malformed input or a numerical breakdown).
    pub fn is_physics_infeasible(&self) -> bool {
        matches!(self, Error::Unbounded(_) | Error::Unsupported(_))
    }

    /// True for truncation, integration and solver failures.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::CutoffTooSmall { .. }
                | Error::NotUnimodal { .. }
                | Error::Numerical(_)
                | Error::Indeterminate(_)
                | Error::FisherDivergence { .. }
                | Error::NegativeProbability { .. }
        )
    }
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

pub(crate) fn check_nonneg(name: &'static str, value: f64) -> Result<f64> {
    check_finite(name, value)?;
    if value < 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative",
        });
    }
    Ok(value)
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    check_finite(name, value)?;
    if value <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        });
    }
    Ok(value)
}
