use thiserror::Error;

/// Errors raised by the arithmetic, sieve and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the documented domain of an operation.
    #[error("{what} out of range: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A request would exceed a memory or size guard.
    #[error("capacity exceeded for {what}: {detail}")]
    Capacity { what: &'static str, detail: String },

    /// Checked 64-bit arithmetic overflowed.
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    /// A computation contradicted a proven theorem. This always indicates
    /// an implementation bug.
    #[error("theorem violated: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn capacity(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Capacity {
            what,
            detail: detail.into(),
        }
    }
}
