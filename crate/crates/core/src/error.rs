use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("trap is not confining: {0}")]
    Unconfined(String),

    #[error("phonon mode unstable: Hessian eigenvalue {eigenvalue:.6e} (rad/μs)² is not positive")]
    ModeInstability { eigenvalue: f64 },

    #[error("no root in bracket: {0}")]
    NoRoot(String),

    #[error("singular denominator 4E₋ + 2B = {0:.3e}")]
    SingularDenominator(f64),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    Domain { name: &'static str, value: f64, lo: f64, hi: f64 },

    #[error("integrator could not meet tolerance at t = {t} μs (step {step:.3e} μs)")]
    ToleranceFailure { t: f64, step: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("invalid value for `{key}`: {reason}")]
    Validation { key: String, reason: String },
}

impl Error {
    /// Configuration problems (as opposed to numerical failures).
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Validation { .. } | Error::InvalidArgument(_) | Error::Domain { .. })
    }
}
