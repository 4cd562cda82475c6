use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field size {p}^{m} exceeds the 2^20 cap")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("modulus is not irreducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field context mismatch")]
    ContextMismatch,
    #[error("{q} is not a power of the characteristic {p}")]
    NotAPower { q: u64, p: u32 },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("constant polynomial where a positive degree is required")]
    ConstantPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("insufficient series precision: {0}")]
    Precision(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("curve is singular: {0}")]
    SingularCurve(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("enumeration budget exceeded: {needed} codewords > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("theorem hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("supports of G and D overlap")]
    SupportOverlap,
    #[error("differential is not fixed by the Cartier iterate")]
    NotFixed,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
