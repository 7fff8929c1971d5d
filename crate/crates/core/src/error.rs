use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported quiver class: {0}")]
    Unsupported(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("oracle certification failure: {0}")]
    Certification(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Unsupported(_) => 2,
            Error::Invariant(_) => 3,
            Error::Certification(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::Unsupported(_) => "unsupported_class",
            Error::Invariant(_) => "invariant_violation",
            Error::Certification(_) => "certification_failure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! invariant {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Invariant(format!($($arg)+)));
        }
    };
}
pub(crate) use invariant;
