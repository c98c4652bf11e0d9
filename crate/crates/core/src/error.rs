use thiserror::Error;

/// Errors raised by the library.
///
/// `Budget` is kept distinct so callers can tell a refusal to enumerate apart
/// from a mathematical failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic: {0}")]
    Characteristic(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("structural error: {0}")]
    Structural(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exceeded: {needed} work units requested, limit is {limit}")]
    Budget { needed: u128, limit: u64 },
    #[error("singular matrix")]
    Singular,
    #[error("Poincaré duality fails in degree {0}")]
    NotPoincareDual(usize),
    #[error("not equivalent under g: {0}")]
    NotEquivalent(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("catalog: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}
