use thiserror::Error;

/// Errors produced by every fallible operation in the crate.
///
/// Each variant has a stable machine-readable [`Error::code`] used by the CLI
/// JSON error objects and by the C ABI status codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("x = {x} is outside the support [{lower}, {upper}]")]
    OutOfSupport { x: f64, lower: f64, upper: f64 },

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("integral diverges: {0}")]
    Diverged(String),

    #[error("quadrature did not converge (best value {value}, error estimate {error_estimate})")]
    NotConverged { value: f64, error_estimate: f64 },

    #[error("unbounded support: {0}")]
    UnboundedSupport(String),

    #[error("invalid order statistic index k = {k} for n = {n}")]
    InvalidIndex { k: usize, n: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("at least 2 observations are required, got {0}")]
    TooFewObservations(usize),

    #[error("negative observation {value} at index {index}")]
    NegativeValue { index: usize, value: f64 },

    #[error("non-finite observation at index {index}")]
    NonFiniteValue { index: usize },

    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),

    #[error("evaluation grid is empty")]
    EmptyGrid,

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("{failed} of {total} grid points failed to evaluate (first failure: {first})")]
    EvaluationFailure { failed: usize, total: usize, first: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::OutOfSupport { .. } => "out_of_support",
            Error::DegenerateDenominator(_) => "degenerate_denominator",
            Error::Diverged(_) => "diverged",
            Error::NotConverged { .. } => "not_converged",
            Error::UnboundedSupport(_) => "unbounded_support",
            Error::InvalidIndex { .. } => "invalid_index",
            Error::DomainError(_) => "domain_error",
            Error::TooFewObservations(_) => "too_few_observations",
            Error::NegativeValue { .. } => "negative_value",
            Error::NonFiniteValue { .. } => "non_finite_value",
            Error::InvalidLevel(_) => "invalid_level",
            Error::EmptyGrid => "empty_grid",
            Error::ZeroDenominator(_) => "zero_denominator",
            Error::EvaluationFailure { .. } => "evaluation_failure",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    /// Usage-level problems (bad input syntax, unreadable files) as opposed to
    /// mathematical domain failures.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Serializable form used in JSON outputs.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ErrorObject {
    pub code: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorObject {
    fn from(e: &Error) -> Self {
        ErrorObject {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
