use crate::kernel::LinalgError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchubertError {
    #[error("Gr({k},{n}) is not a valid Grassmannian (need 0 < k < n)")]
    InvalidGrassmannian { k: usize, n: usize },

    #[error("bracket {entries:?} is invalid for Gr({k},{n}): {reason}")]
    InvalidBracket {
        entries: Vec<usize>,
        k: usize,
        n: usize,
        reason: &'static str,
    },

    #[error("partition {parts:?} is invalid for Gr({k},{n}): {reason}")]
    InvalidPartition {
        parts: Vec<usize>,
        k: usize,
        n: usize,
        reason: &'static str,
    },

    #[error("condition {index}: {source}")]
    InvalidCondition {
        index: usize,
        #[source]
        source: Box<SchubertError>,
    },

    #[error("condition codimensions sum to {actual}, expected k(n-k) = {expected}")]
    CodimensionSum { expected: usize, actual: usize },

    #[error("brackets {a} and {b} live on different Grassmannians")]
    GrassmannianMismatch { a: String, b: String },

    #[error("brackets {a} and {b} have an empty Richardson intersection")]
    EmptyRichardson { a: String, b: String },

    #[error("flag {index}: {reason}")]
    InvalidFlag { index: usize, reason: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("the first two flags are not in general position; regenerate or perturb them")]
    DegenerateFlags,

    #[error("condition {index} {bracket} has codimension {codimension}; only two conditions may be non-simple")]
    NotSimple {
        index: usize,
        bracket: String,
        codimension: usize,
    },

    #[error("instance is not normalized: the first two flags must be the standard and opposite flags")]
    NotNormalized,

    #[error("equation {0} has degree zero")]
    ConstantEquation(usize),

    #[error("system has {equations} equations in {vars} unknowns and cannot be squared up")]
    Underdetermined { equations: usize, vars: usize },

    #[error("expected {expected} items, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T, E = SchubertError> = std::result::Result<T, E>;
