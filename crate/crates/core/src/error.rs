use thiserror::Error;

/// Errors raised by constructions. Axiom violations found by validators are
/// reported as data in a [`crate::report::Report`], not through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("action is not free: {0}")]
    NotFree(String),

    #[error("bound exceeded: arity {arity} is above the bound {bound}")]
    BoundExceeded { arity: usize, bound: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn is_bound_exceeded(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
