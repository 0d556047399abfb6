use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    /// All known coefficients vanish but the value is not known to be zero.
    #[error("ambiguous zero: no nonzero coefficient at or above floor {floor}")]
    AmbiguousZero { floor: i64 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coefficient {value} out of range for the field")]
    CoefficientOutOfRange { value: String },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("every profile entry is precision-flagged")]
    AllFlagged,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
