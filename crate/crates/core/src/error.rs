use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has no entries")]
    EmptyMatrix,
    #[error("gcd({a}, {b}) != 1")]
    NonCoprimeInput { a: BigInt, b: BigInt },
    #[error("relation matrix is singular, quotient is infinite")]
    InfiniteQuotient,
    #[error("elements or maps belong to different groups")]
    ParentMismatch,
    #[error("{what}: {count} exceeds cap {cap}")]
    BoundExceeded { what: &'static str, count: BigInt, cap: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate parameters m = n = {0}: torsion subgroup is infinite")]
    DegenerateParams(i64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("map does not respect the defining relations")]
    NotWellDefined,
    #[error("action does not intertwine psi as required by epsilon")]
    NotHomomorphism,
    #[error("action on the torsion subgroup is not bijective")]
    NotBijective,
    #[error("{d} does not divide {m}")]
    NonDivisor { m: i64, d: i64 },
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("t-exponent overflow")]
    ExponentOverflow,
}

pub type Result<T> = std::result::Result<T, Error>;
