use thiserror::Error;

/// Error categories map onto CLI exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("size guard exceeded: {what} would have {count} items (guard {guard})")]
    SizeGuard { what: String, count: usize, guard: usize },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("certificate verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }

    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 2,
            Error::SizeGuard { .. } => 3,
            Error::Degenerate(_) => 4,
            Error::Verification(_) => 5,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::SizeGuard { .. } => "size_guard",
            Error::Degenerate(_) => "degenerate",
            Error::Verification(_) => "verification",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on enumerated cells.
pub const DEFAULT_SIZE_GUARD: usize = 10_000_000;
