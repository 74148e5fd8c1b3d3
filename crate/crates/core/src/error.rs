use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not monic of degree {degree}")]
    NotMonic { degree: u32 },
    #[error("polynomial {0:?} is reducible")]
    NotIrreducible(Vec<u32>),
    #[error("field order {0} exceeds the supported range")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("cocycle is not normalized at ({0}, {1})")]
    NotNormalized(usize, usize),
    #[error("cocycle identity violated at (g,h,k) = ({0}, {1}, {2})")]
    CocycleIdentityViolated(usize, usize, usize),
    #[error("map does not match the group/field domain: {0}")]
    DomainMismatch(String),
    #[error("{divisor} does not divide {order}")]
    DivisibilityViolated { divisor: usize, order: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("not a generalized Hadamard matrix: rows {i},{j} hit {u} {count} times")]
    NotGeneralizedHadamard { i: usize, j: usize, u: u32, count: usize },
    #[error("matrix orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("matrix is not normalized")]
    MatrixNotNormalized,
    #[error("rows {0} and {1} coincide")]
    DuplicateRows(usize, usize),
    #[error("the zero word is not a codeword")]
    ZeroNotInCode,
    #[error("cocycle is not orthogonal: row {g} hits {u} {count} times")]
    NotOrthogonal { g: usize, u: u32, count: usize },
    #[error("vector is not a codeword")]
    NotACodeword,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("expected a subset of size {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("coset {0} has no representative in F_H")]
    SectionUndefined(usize),
    #[error("inadmissible planar parameters (a,b) = ({0},{1})")]
    InadmissibleParams(u32, u32),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("matrix is not monomial: {0}")]
    NotMonomial(String),
    #[error("automorphism check failed for codeword {0}")]
    AutomorphismCheckFailed(usize),
    #[error("size gate exceeded: {size} > {limit}")]
    SizeGateExceeded { size: usize, limit: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}
