use thiserror::Error;

use crate::words::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("{0}")]
    Invalid(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("budget exceeded: {needed} evaluations needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("unmapped variable {0}")]
    Unmapped(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
