use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("parse error at line {line}, field `{field}`: {reason}")]
    Parse {
        line: usize,
        field: String,
        reason: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("rank-deficient constraint system: {0}")]
    RankDeficient(String),

    #[error("floating underflow after index {last_valid}")]
    Underflow { last_valid: usize },

    #[error("empty grid")]
    EmptyGrid,

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
