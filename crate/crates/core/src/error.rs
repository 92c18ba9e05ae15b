use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation left its numerically trustworthy regime.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A linear system was singular or too ill-conditioned to solve.
    #[error("singular linear system: {0}")]
    SingularSystem(String),

    /// An iterative solver did not meet its tolerance within the cap.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// The requested evaluation exceeds the configured precision-safe range.
    #[error("precision limit: {0}")]
    Precision(String),

    /// The input distribution does not expose a required capability.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
