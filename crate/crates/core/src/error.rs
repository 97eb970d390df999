use thiserror::Error;

/// Error type shared by all modules of the kernel.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Operands that do not belong together (mismatched generator systems,
    /// dimension mismatches, malformed inputs).
    #[error("structural error: {0}")]
    Structural(String),
    /// Input outside the analytic/invertibility domain of an operation
    /// (pole proximity, singular denominators, wrong parity, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical procedure failed to converge within its budget.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A configuration document could not be parsed.
    #[error("config parse error: {0}")]
    Parse(String),
    /// A parsed object failed its structural invariants.
    #[error("validation error: {0}")]
    Validation(String),
    /// A seeded sampler ran out of attempts to satisfy domain guards.
    #[error("guard exhaustion: {0}")]
    GuardExhaustion(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
