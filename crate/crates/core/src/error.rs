use thiserror::Error;

use crate::starfield::Field;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of the supported range")]
    ModulusTooLarge(u64),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("dimension {dim} outside 1..={max}")]
    Dimension { dim: usize, max: usize },
    #[error("zero matrix has no full-rank factorization")]
    ZeroMatrix,
    #[error("{0} is not a finite field")]
    InfiniteField(Field),
    #[error("missing {0}")]
    MissingInverse(&'static str),
    #[error("computed {which} fails its defining equations")]
    InverseOracle { which: &'static str },
    #[error("closed form for {which} disagrees with the direct computation")]
    ClosedFormMismatch { which: &'static str },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("enumeration of {size} elements exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("unknown theorem entry {0:?}")]
    UnknownEntry(String),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}
