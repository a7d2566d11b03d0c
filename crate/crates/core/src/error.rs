use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group spec {input:?}: {reason}")]
    GroupSyntax { input: String, reason: String },

    #[error("element index {index} out of range for a group of order {order}")]
    ElementOutOfRange { index: u64, order: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("the identity element is present in the input set")]
    IdentityPresent,

    /// Element indices of the observed and required sums.
    #[error("set sums to element {actual}, required {required}")]
    SumMismatch { actual: u32, required: u32 },

    #[error("divisibility violated: {0}")]
    Divisibility(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration of {size} cases exceeds the cap of {cap}")]
    Budget { size: u128, cap: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
