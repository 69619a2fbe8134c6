use thiserror::Error;

/// Errors produced by lattice and discriminant-form computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("degenerate lattice: {0}")]
    Degenerate(String),

    #[error("q_L requires an even lattice")]
    NotEven,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("linearly dependent generators: {0:?} is a vanishing combination")]
    Dependent(Vec<i64>),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A brute-force search would exceed its configured cap. The answer is unknown,
    /// never a silent negative.
    #[error("inconclusive by brute force: {what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: u64 },
}

impl Error {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn cap(what: impl Into<String>, cap: u64) -> Self {
        Error::CapExceeded {
            what: what.into(),
            cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
