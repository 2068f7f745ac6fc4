use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit statuses: [`Error::Budget`] is a
/// refusal (exit 3), everything else is a usage error (exit 2).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands disagree on prime or precision, or an argument is out of range.
    #[error("usage error: {0}")]
    Usage(String),

    /// The input lies outside the domain of the operation (non-surjective
    /// character, invalid type, canonical counting with l >= p, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation's precondition on its input form does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A character has a unit coefficient above the claimed break.
    #[error("inconsistent character: {0}")]
    Inconsistent(String),

    /// Malformed text input; `offset` is a byte offset into the input.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// An exhaustive search would exceed the configured budget.
    #[error("search space of {cost} candidates exceeds the budget of {budget}")]
    Budget { cost: u128, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
