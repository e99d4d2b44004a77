use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates an operation's precondition.
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    /// An enumeration or oracle would exceed its size guard.
    #[error("{what} is too large: predicted size {size} exceeds the limit {limit}")]
    TooLarge {
        what: String,
        size: String,
        limit: String,
    },

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("{0}")]
    Numerical(String),

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn too_large(what: impl Into<String>, size: impl ToString, limit: impl ToString) -> Self {
        Error::TooLarge {
            what: what.into(),
            size: size.to_string(),
            limit: limit.to_string(),
        }
    }

    /// True for feasibility-guard rejections, as opposed to bad input.
    pub fn is_feasibility(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}
