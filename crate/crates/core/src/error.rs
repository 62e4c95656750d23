use thiserror::Error;

/// Every fallible operation in the crate returns this error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DunklError {
    #[error("pole: {0}")]
    Pole(String),
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("requested order {requested} exceeds cap {cap}")]
    OrderCap { requested: usize, cap: usize },
    #[error("Newton iteration stalled at node {index}")]
    NewtonStall { index: usize },
    #[error("subdivision cap reached: estimate {estimate:e}, error bound {error_bound:e}")]
    SubdivisionCap { estimate: f64, error_bound: f64 },
    #[error("envelope not integrable: {0}")]
    Envelope(String),
    #[error("operation needs a structured function spec: {0}")]
    Structure(String),
    #[error("mode error: {0}")]
    Mode(String),
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(f64),
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NonHermitian { defect: f64 },
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),
    #[error("missing derivative of order {0}")]
    MissingDerivative(usize),
    #[error("non-finite value: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, DunklError>;
