use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An exhaustive routine was asked to work on an input above its size guard.
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("extended precision overflow: {0}")]
    Precision(String),

    /// A construction produced an object failing its own certificate check.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
