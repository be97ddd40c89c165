use thiserror::Error;

use crate::geom::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("basis is singular (determinant 0)")]
    SingularBasis,
    #[error("matrix has determinant {0}, expected ±1")]
    NotUnimodular(i64),
    #[error("coordinate {0} exceeds the supported range")]
    CoordinateOverflow(Point),
    #[error("degenerate polygon: {0}")]
    Degenerate(String),
    #[error("vertices are not in strictly convex counterclockwise order")]
    NotConvex,
    #[error("edge {index} of the slope is not monotone in the basis")]
    Monotonicity { index: usize },
    #[error("edges {index} and {} of the slope turn the wrong way", index + 1)]
    Convexity { index: usize },
    #[error("slope basis does not match the frame basis")]
    BasisMismatch,
    #[error("invalid signed basis: {0}")]
    InvalidBasis(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no witness found: {0}")]
    NoWitness(String),
    #[error("search exhausted within bound {bound}")]
    SearchExhausted { bound: i64 },
    #[error("node budget of {budget} exceeded after {nodes} nodes")]
    BudgetExceeded { budget: u64, nodes: u64 },
    #[error("internal invariant broken: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
