//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("loop edge at {0}")]
    LoopEdge(String),
    #[error("cycle of length {0} (minimum 3)")]
    CycleTooShort(usize),
    #[error("repeated vertex in cycle {0}")]
    RepeatedVertex(String),
    #[error("cycle length {found}, factor requires {expected}")]
    WrongCycleLength { expected: usize, found: usize },
    #[error("vertex {0} outside the ambient vertex set")]
    VertexOutOfRange(String),
    #[error("vertex {0} covered twice")]
    OverlappingCycles(String),
    #[error("factor does not match its span (missing {missing:?}, extra {extra:?})")]
    NotSpanning {
        missing: Option<String>,
        extra: Option<String>,
    },
    #[error("cycle lengths must be at least 3 (m={m}, n={n})")]
    BadCycleKind { m: u16, n: u16 },
}

#[derive(Debug, Error)]
pub enum DevelopError {
    #[error("declared orbit length {declared} but recomputed {actual}")]
    OrbitLengthMismatch { declared: usize, actual: usize },
    #[error("tiling failure: {0}")]
    TilingFailure(#[from] CoreError),
    #[error("translate of an infinity-containing cycle must fix infinities")]
    InfinityMoved,
    #[error("action modulus {action} does not match descriptor modulus {descriptor}")]
    ModulusMismatch { action: u16, descriptor: u16 },
    #[error("duplicate factors in development (translate {0} repeats an earlier one)")]
    DuplicateFactor(usize),
}

#[derive(Debug, Error)]
pub enum CayleyError {
    #[error("connection set not closed under negation: missing {0:?}")]
    NotClosedUnderNegation((u16, u16)),
    #[error("connection set contains (0,0)")]
    ContainsZero,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("factors do not partition the Cayley edge set: {0}")]
    NotAPartition(String),
}
