use thiserror::Error;

/// Errors raised by amplitude computations, quadrature and sweep configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZenoError {
    #[error("numeric overflow in {context}: magnitude {magnitude:e} exceeds {limit:e}")]
    Overflow {
        context: &'static str,
        magnitude: f64,
        limit: f64,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("geometric series at its radius of convergence (|x| = {modulus})")]
    GeometricBoundary { modulus: f64 },

    #[error("quadrature did not converge: error bound {error_bound:e} > tolerance {tolerance:e} after {evaluations} evaluations")]
    NotConverged {
        error_bound: f64,
        tolerance: f64,
        evaluations: u64,
    },

    #[error("configuration error ({field}): {reason}")]
    Config { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, ZenoError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> ZenoError {
    ZenoError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
