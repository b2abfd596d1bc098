use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular input: {0}")]
    SingularInput(String),

    /// A derivative or recursion step needs more trusted spatial degrees
    /// than the operand carries.
    #[error("validity exhausted: {what} needs valid degree {needed}, have {available}")]
    ValidityExhausted {
        what: String,
        needed: usize,
        available: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("missing coefficient bounds: {0}")]
    MissingBounds(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error class: 2 for bad input, 3 for
    /// numerical degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ValidityExhausted { .. } | Error::SingularInput(_) => 3,
            _ => 2,
        }
    }
}
