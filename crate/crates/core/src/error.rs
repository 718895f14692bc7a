use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value for `{0}`")]
    NonFinite(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge on [{lower}, {upper}] (error estimate {estimate:e})")]
    Quadrature {
        lower: f64,
        upper: f64,
        estimate: f64,
    },

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("condition violated: {0}")]
    ConditionViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::NonFinite(_) => "non_finite",
            Error::Domain(_) => "domain_error",
            Error::Quadrature { .. } => "quadrature_failure",
            Error::Bracket(_) => "bracket_failure",
            Error::ConditionViolation(_) => "condition_violation",
            Error::Unsupported(_) => "unsupported",
            Error::Parse(_) => "parse_error",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Degenerate(_) => "degenerate_input",
        }
    }

    /// `true` for failures raised while computing, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Quadrature { .. }
                | Error::Bracket(_)
                | Error::ConditionViolation(_)
                | Error::Degenerate(_)
        )
    }
}

pub(crate) fn finite(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(name))
    }
}
