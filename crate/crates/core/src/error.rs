//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's inputs was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A function id that is not in the benchmark catalog.
    #[error("unknown function id {0}")]
    Catalog(u32),

    /// An evaluation was requested beyond the budget limit.
    #[error("evaluation budget exhausted: used {used} of {limit}, requested {requested} more")]
    Budget { used: u64, limit: u64, requested: u64 },

    /// Dataset assembly found inconsistent inputs (e.g. a missing label).
    #[error("consistency error: {0}")]
    Consistency(String),

    /// A racing or streaming protocol could not be completed.
    #[error("protocol error: {0}")]
    Protocol(String),

    /// Bad command-line or configuration input.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code for the CLI contract: 2 usage, 3 file/IO,
    /// 4 domain/budget.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Usage(_) => 2,
            Error::Io(_) | Error::Json(_) => 3,
            _ => 4,
        }
    }
}
