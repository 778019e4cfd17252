//! Error types shared across the toolkit.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A caller-supplied argument violates an operation's preconditions.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The input data is degenerate for the requested statistic
    /// (constant series, zero variance, singular regression, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Numerical estimation could not produce a usable model.
    #[error("estimation failed: {0}")]
    Estimation(String),

    /// A series value is NaN or infinite.
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateInput(msg.into())
    }
}
