use thiserror::Error;

use crate::report::CheckReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: duplicate ids, dangling references, ill-typed data.
    #[error("input error: {0}")]
    Input(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    /// A structure failed its law check and cannot be constructed.
    #[error("{} failed with {} violation(s)", .0.check, .0.violations.len())]
    Laws(Box<CheckReport>),

    /// An operation was called outside its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Two independent computations that must agree did not.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors caused by the caller's data rather than a failed law.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_)
                | Error::UnknownObject(_)
                | Error::UnknownMorphism(_)
                | Error::Precondition(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
