use thiserror::Error;

use crate::radii::Subspace;

/// Reasons a vertex list is rejected as a unit ball.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BallError {
    #[error("ball needs an even number of vertices, got {0}")]
    OddVertexCount(usize),
    #[error("ball needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex coordinates must be finite (vertex {0})")]
    NonFinite(usize),
    #[error("vertex {index} is not the negative of vertex {partner} (deviation {deviation:.3e})")]
    NotSymmetric {
        index: usize,
        partner: usize,
        deviation: f64,
    },
    #[error("ball is not strictly convex at vertex {index}")]
    NotConvex { index: usize },
    #[error("side {index} has zero length")]
    DegenerateSide { index: usize },
    #[error("vertices wind {winding} times around the origin, expected once")]
    NotSimple { winding: i64 },
    #[error("traversal count must be at least 1, got {0}")]
    InvalidM(usize),
}

/// Errors raised by the radii, operator, spectral and rendering layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CycloidError {
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error("radii vectors refer to different balls")]
    BallMismatch,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("projection onto {0:?} is not supported")]
    UnsupportedTarget(Subspace),
    #[error("polygon does not close (drift {drift:.3e})")]
    NotClosed { drift: f64 },
    #[error("direction vector must be non-zero")]
    ZeroDirection,
    #[error("radii vector is identically zero")]
    AllZero,
    #[error("radii are constant (the polygon is homothetic to the ball)")]
    ConstantRadii,
    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),
    #[error("spectrum violates the expected ordering: {0}")]
    SpectralOrderViolation(String),
    #[error("eigenvalue 1 has multiplicity {multiplicity}, expected 2")]
    NotDoubleEigenvalueOne { multiplicity: usize },
    #[error("solution pair is degenerate at index {index}")]
    DegenerateSolutionPair { index: usize },
    #[error("reconstructed polygon is not a valid ball: {0}")]
    NotABall(BallError),
    #[error("no root of the trace equation bracketed in interval {interval} for j = {j}")]
    RootNotBracketed { interval: usize, j: usize },
    #[error("four-edgex check failed: {0}")]
    TheoremViolated(String),
    #[error("nothing to render")]
    EmptyInput,
    #[error("invalid render setting: {0}")]
    InvalidRenderSpec(String),
    #[error("{0}")]
    Format(String),
}

/// Coarse split used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input data.
    Validation,
    /// A numerical routine did not deliver what the theory guarantees.
    Numerical,
}

impl CycloidError {
    pub fn class(&self) -> ErrorClass {
        match self {
            CycloidError::EigensolverFailure(_)
            | CycloidError::SpectralOrderViolation(_)
            | CycloidError::RootNotBracketed { .. }
            | CycloidError::TheoremViolated(_) => ErrorClass::Numerical,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T, E = CycloidError> = std::result::Result<T, E>;
