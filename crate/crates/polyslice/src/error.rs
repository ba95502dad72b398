use thiserror::Error;

use crate::bodies::{BodyKind, Canonical};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SliceError {
    #[error("dimension n = {0} is below the minimum of 2")]
    DimensionTooSmall(usize),
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is zero after projection onto the constraint subspace")]
    ZeroVector,
    #[error("vector is not a valid direction: {0}")]
    InvalidDirection(&'static str),
    #[error("{which:?} is not defined for {body:?}")]
    Unsupported { which: Canonical, body: BodyKind },
    #[error("face dimension {dim} outside 0..={max}")]
    DimensionOutOfRange { dim: usize, max: usize },
    #[error("hyperplane does not separate a single vertex")]
    RegimeViolation,
    #[error("integral representation not available: {0}")]
    UnsupportedQuery(&'static str),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(&'static str),
    #[error("integrand has fewer than two nonzero coefficients")]
    NotIntegrable,
    #[error("only {hits} samples fell in the slab (need 100)")]
    InsufficientHits { hits: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("direction is not a critical point (residual {0:e})")]
    NotCritical(f64),
    #[error("outside the formula's domain: {0}")]
    DomainError(&'static str),
    #[error("classification does not change over the scanned interval")]
    NoFlipFound,
    #[error("{0} exceeds the supported size")]
    ResourceLimit(&'static str),
}

pub type Result<T> = core::result::Result<T, SliceError>;
