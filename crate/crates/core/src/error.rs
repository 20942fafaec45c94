use thiserror::Error;

use crate::cube::Name;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension variable `{0}` is not bound in the ambient context")]
    Unbound(Name),

    #[error("name collision: `{0}` is already bound")]
    Collision(Name),

    #[error("context mismatch: expected {expected}, found {found}")]
    ContextMismatch { expected: String, found: String },

    #[error("ill-sorted term: {0}")]
    Sort(String),

    #[error("term `{0}` is not syntactically invertible")]
    NotInvertible(String),

    #[error("incompatible pieces under {meet}: `{left}` vs `{right}`")]
    IncompatiblePieces {
        meet: String,
        left: String,
        right: String,
    },

    #[error("piece does not agree with the hom under {face}: `{piece}` vs `{hom}`")]
    NonPropositionalPiece {
        face: String,
        piece: String,
        hom: String,
    },

    #[error("rewrite step budget of {0} exceeded")]
    BudgetExceeded(usize),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn sort(msg: impl Into<String>) -> Self {
        Error::Sort(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
