use thiserror::Error;

/// Errors produced by field construction, geometry, the hemisystem
/// construction and the verification engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrime(u64),

    #[error("field of order {p}^{degree} exceeds the table budget of {budget} elements")]
    TableBudgetExceeded { p: u64, degree: u32, budget: u64 },

    #[error("no primitive polynomial of degree {degree} found over F_{p}")]
    NoPrimitivePolynomialFound { p: u64, degree: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("trace from {top} down to {bottom} is not defined")]
    LevelMismatch { top: String, bottom: String },

    #[error("element does not lie in {0}")]
    NotInSubfield(String),

    #[error("q = {0} is not congruent to 3 mod 4")]
    BadCongruence(u64),

    #[error("{d0} is not an element of I_Q")]
    InvalidD0 { d0: u32 },

    #[error("index set collision: residue {0} produced twice")]
    CollisionDetected(u32),

    #[error("zero is not a member of any cyclotomic class")]
    ZeroInput,

    #[error("scalar orbit of residue {0} leaves the index set")]
    ScalarOrbitNotClosed(u32),

    #[error("character sum over class {class} is not a rational integer (counts {counts:?})")]
    NonIntegerCharacterValue { class: u32, counts: Vec<u64> },

    #[error("verification of {check} failed: {detail}")]
    VerificationFailure { check: String, detail: String },

    #[error("{0} is not a divisor of N = {1}")]
    NotADivisor(u64, u64),

    #[error("{0}")]
    NotApplicable(String),

    #[error("summation over {terms} terms exceeds the budget of {budget}")]
    BudgetExceeded { terms: u64, budget: u64 },

    #[error("field cache: {0}")]
    Cache(String),

    #[error("descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn failure(check: &str, detail: impl Into<String>) -> Self {
        Error::VerificationFailure {
            check: check.to_string(),
            detail: detail.into(),
        }
    }
}
