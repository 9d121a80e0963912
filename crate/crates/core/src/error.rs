use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("modulus is reducible")]
    ReducibleModulus,
    #[error("modulus is irreducible but not primitive")]
    NotPrimitiveModulus,
    #[error("element does not belong to this tower")]
    TowerMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{d} does not divide {m}")]
    DoesNotDivide { d: u32, m: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("entry is not in the base field")]
    NotInBaseField,
    #[error("vector is not linearly independent over the base field")]
    DependentVector,
    #[error("element is not in the span of the given tuple")]
    NotInSpan,
    #[error("generator rows are linearly dependent")]
    RankDeficient,
    #[error("code parameters out of range: {0}")]
    CodeParams(String),
    #[error("subspaces have different ambient dimensions")]
    AmbientMismatch,
    #[error("subspace code is not of constant dimension")]
    NotConstantDimension,
    #[error("codewords do not share a common pivot set")]
    MixedPivots,
    #[error("codeword set is not a linear space")]
    NotLinear,
    #[error("transposition needs l = m")]
    IllegalTranspose,
    #[error("bad pivot list: {0}")]
    BadPivots(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
