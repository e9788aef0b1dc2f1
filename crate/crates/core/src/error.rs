use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a supported prime (expected a prime 2 <= p <= 13)")]
    UnsupportedPrime(u32),
    #[error("mismatched characteristic: {0} vs {1}")]
    MismatchedPrime(u32, u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("digit {digit} out of range for p = {p}")]
    DigitOutOfRange { digit: u32, p: u32 },
    #[error("space of size {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("budget exceeded: {needed} operations requested, {budget} allowed")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("denominator exponent {exp} overflows 64-bit arithmetic for p = {p}")]
    ExponentOverflow { p: u32, exp: u32 },
    #[error("empty counter")]
    EmptyCounter,
    #[error("not a polynomial of degree <= {bound} (found degree {found})")]
    DegreeTooHigh { bound: i64, found: i64 },
    #[error("non-classical input: {0}")]
    NonClassical(&'static str),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("incomplete lookup table: value tuple {0} has no entry")]
    IncompleteTable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
