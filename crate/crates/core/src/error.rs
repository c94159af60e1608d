use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the numerical routines can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {what}")]
    NonFinite { what: &'static str },

    #[error("{what} = {value} lies outside {domain}")]
    OutsideDomain {
        what: &'static str,
        value: Complex64,
        domain: &'static str,
    },

    #[error("logarithm of zero")]
    LogOfZero,

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation N = {n} too small for a rigorous tail bound (need N >= {required})")]
    TruncationTooSmall { n: usize, required: usize },

    #[error("evaluation failed at {point}: {reason}")]
    Evaluation { point: Complex64, reason: String },

    #[error("largest arc grows from {previous} at r = {r_previous} to {current} at r = {r_current}; domain is not star-like about 0")]
    MonotonicityViolation {
        r_previous: f64,
        previous: f64,
        r_current: f64,
        current: f64,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("path {path_index} exceeded the step cap of {cap} steps ({completed_paths} paths completed, partial mean {partial_mean})")]
    StepCapExceeded {
        path_index: u64,
        cap: u64,
        completed_paths: usize,
        partial_mean: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
