use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("nilpotency index must be at least 1, got {0}")]
    InvalidNilpotency(u32),
    #[error("residue degree must be at least 1, got {0}")]
    InvalidDegree(u32),
    #[error("family Zpv requires m = 1, got m = {0}")]
    ZpvExtension(u32),
    #[error("family FqU with m > 1 requires a modulus polynomial")]
    MissingModulus,
    #[error("modulus {0:?} is not a monic irreducible polynomial of degree {1} over F_{2}")]
    ReducibleModulus(Vec<u32>, u32, u32),
    #[error("ring of order {0} exceeds the supported size")]
    RingTooLarge(u128),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NonUnit,
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("invalid group description: {0}")]
    InvalidGroup(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{what} {value} out of range 0..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("the zero code has no minimum distance")]
    ZeroCode,
    #[error("code is not free")]
    NotFree,
    #[error("enumeration of {needed} candidates exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("malformed element encoding: {0}")]
    Encoding(String),
    #[error("parse error: {0}")]
    Parse(String),
}
