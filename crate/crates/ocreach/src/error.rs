use thiserror::Error;

/// Errors raised by the library. Each variant maps to one CLI exit class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("monotone representation required: {0}")]
    NonMonotone(String),
    #[error("branch not parameter-injective: branch {0}")]
    NotInjective(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("automaton has a cycle at state {0}")]
    Cyclic(usize),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("classification mismatch: {0}")]
    ClassificationMismatch(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), msg: msg.into() }
    }

    /// True for errors caused by malformed or invalid input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::InvalidAutomaton(_)
                | Error::InvalidTarget(_)
                | Error::NonMonotone(_)
                | Error::NotInjective(_)
                | Error::Precondition(_)
                | Error::ClassificationMismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
