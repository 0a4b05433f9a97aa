//! Error type shared by all modules.

/// Failure modes of the model's operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Input violates a precondition (non-finite value, empty grid,
    /// out-of-range rate, unstable integrator step, drive too strong).
    #[error("rejected input: {0}")]
    Rejected(String),

    /// The requested value does not exist for these inputs (division by a
    /// structurally zero quantity).
    #[error("singular input: {0}")]
    Singular(String),

    /// The requested value exists but carries no information for these
    /// inputs (for example a reflection ratio with zero drive).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn rejected(msg: impl Into<String>) -> Self {
        Error::Rejected(msg.into())
    }

    pub(crate) fn singular(msg: impl Into<String>) -> Self {
        Error::Singular(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}
