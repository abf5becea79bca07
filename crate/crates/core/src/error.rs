use thiserror::Error;

/// Errors raised by the spinlab engine.
///
/// The variants split into caller mistakes (`Contract`, `Dimension`, `Parse`)
/// and numerical failures (`Numeric`). `AtPoint` wraps either kind with the
/// sweep coordinates that produced it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension {requested} exceeds the cap of {cap}")]
    Dimension { requested: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("at {coords}: {source}")]
    AtPoint { coords: String, source: Box<Error> },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// True when the root cause is a numerical failure rather than bad input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::Numeric(_) => true,
            Error::AtPoint { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
