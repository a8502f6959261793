use thiserror::Error;

/// Errors raised by the library. Axiom and law violations are not errors;
/// they are reported as content of the relevant report types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands belong to different algebras")]
    OwnerMismatch,
    #[error("result leaves the truncation window: {0}")]
    OutOfWindow(String),
    #[error("scalar mode mismatch: expected {expected}, found {found}")]
    ScalarModeMismatch { expected: String, found: String },
    #[error("operation requires a star structure")]
    NoStar,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not idempotent: {0}")]
    NotIdempotent(String),
    #[error("projection is not self-adjoint: {0}")]
    NotSelfAdjoint(String),
    #[error("entries do not commute: {0}")]
    NonCommutativeEntries(String),
    #[error("owner algebra is not graded commutative: {0}")]
    NotGradedCommutative(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("ill-conditioned rank decision, all coefficients below threshold: {0}")]
    ZeroMatrix(String),
    #[error("map is not a morphism of connections: {0}")]
    NotAMorphism(String),
    #[error("restriction of the connection escapes the graded center: {0}")]
    RestrictionEscapesCenter(String),
    #[error("character is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("numerical divergence: {0}")]
    DivergenceDetected(String),
    #[error("sample outside the logarithm's convergence radius: {0}")]
    OutsideConvergenceRadius(String),
    #[error("endomorphisms do not commute: {0}")]
    NonCommutingEndos(String),
    #[error("connection is not in normal form: {0}")]
    NotInNormalForm(String),
    #[error("connection is not flat: {0}")]
    NotFlat(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
