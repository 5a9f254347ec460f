use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("gaussian binomial [{m} over {k}] requires k <= m")]
    BinomialRange { m: u64, k: u64 },

    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,

    #[error("not a polynomial in q with the required shape: {0}")]
    NotAPolynomial(String),

    #[error("dimension vector has {got} entries but the quiver has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("arrow relation has a cycle through vertices {0:?}")]
    Cycle(Vec<usize>),

    #[error("invalid quiver field `{field}`: {reason}")]
    InvalidQuiver { field: &'static str, reason: String },

    #[error("the zero dimension vector has no slope")]
    ZeroVector,

    #[error("series live in different contexts")]
    ContextMismatch,

    #[error("constant term must be 1, found {0}")]
    NonUnitConstant(String),

    #[error("dimension vector {0:?} does not have the requested slope")]
    MixedSlopes(Vec<u32>),

    #[error("slope symmetry has not been established: {0}")]
    SymmetryUnchecked(String),

    #[error("dimension vector {d:?} has weight {weight} beyond truncation {truncation}")]
    BeyondTruncation { d: Vec<u32>, weight: i64, truncation: u32 },

    #[error("exponent polynomial must have integer coefficients, found {0}")]
    NonIntegralExponent(String),

    #[error("Kronecker quiver needs at least one arrow, got m = {0}")]
    KroneckerArity(i64),

    #[error("special value formula needs m >= 3 and k >= 1, got m = {m}, k = {k}")]
    SpecialValueRange { m: u32, k: u32 },

    #[error("DT coefficient at {d:?} is not a Laurent polynomial: {value}")]
    DtNotLaurent { d: Vec<u32>, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;
