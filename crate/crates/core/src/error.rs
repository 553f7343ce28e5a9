use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("{prime} is not a simple prime divisor of {order}")]
    NotSimpleDivisor { prime: u32, order: usize },

    #[error("{unit} is not a unit modulo the exponent {exponent}")]
    NonUnit { unit: i64, exponent: u32 },

    #[error("size limit exceeded: {what} is {actual}, bound is {bound}")]
    SizeLimit {
        what: &'static str,
        actual: u128,
        bound: u128,
    },

    #[error("group mismatch: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("subgroup is not a union of basic sets")]
    NotASubgroup,

    #[error("set is not a subgroup")]
    NotSubgroup,

    #[error("group does not contain the right regular representation")]
    NotOvergroup,

    #[error("automorphism set is not closed under composition")]
    NotClosed,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("methods disagree: {0}")]
    Contradiction(String),

    #[error("empty set has no radical")]
    EmptySet,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn size_limit(what: &'static str, actual: impl Into<u128>, bound: impl Into<u128>) -> Self {
        Error::SizeLimit {
            what,
            actual: actual.into(),
            bound: bound.into(),
        }
    }
}
