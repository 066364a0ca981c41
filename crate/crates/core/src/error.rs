use thiserror::Error;

/// Errors produced by the model, surface, solver and oracle routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quantity fell outside the region where a formula is defined.
    #[error("domain error: {quantity} = {value} ({reason})")]
    Domain {
        quantity: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Model parameters violate their invariants.
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A sampling range or window is empty, reversed or too small.
    #[error("invalid range: {0}")]
    InvalidRange(String),

    /// The requested system is too large for the chosen evaluation method.
    #[error("size error: N = {n} exceeds the limit {limit} for {method}")]
    TooLarge {
        n: u64,
        limit: u64,
        method: &'static str,
    },

    /// Root bracketing found more roots than the tanh map can have.
    #[error("numerical pathology: found {count} roots of the self-consistent equation")]
    TooManyRoots { count: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(quantity: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            quantity,
            value,
            reason,
        }
    }
}
