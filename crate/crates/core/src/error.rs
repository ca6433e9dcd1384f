use thiserror::Error;

/// Errors raised by the spectral engine.
///
/// Numeric payloads are stored as `f64` regardless of the working scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex degree must be at least 2, got {0}")]
    InvalidDegree(usize),

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("zero energy is excluded here; use the closed-form conditions")]
    ZeroEnergy,

    #[error("kappa * max(pi, ell) = {exponent} exceeds the overflow guard {limit}; use the closed forms")]
    Overflow { exponent: f64, limit: f64 },

    #[error("matrix is numerically singular")]
    Singular,

    #[error(
        "resolution {resolution} is too coarse: must be below half the minimal anchor spacing {min_spacing}"
    )]
    ResolutionTooCoarse { resolution: f64, min_spacing: f64 },

    /// An analytically guaranteed crossing could not be bracketed; carries the
    /// scanned `(x, Φ(x))` profile for diagnosis.
    #[error("solver failure: {message}")]
    Solver {
        message: String,
        profile: Vec<(f64, f64)>,
    },

    #[error("witness `{name}` failed: computed {computed}, expected {expected} +/- {tolerance}")]
    WitnessFailed {
        name: String,
        computed: f64,
        expected: f64,
        tolerance: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad caller input rather than by the numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidDegree(_)
                | Error::InvalidParameter { .. }
                | Error::ZeroEnergy
                | Error::ResolutionTooCoarse { .. }
        )
    }
}
