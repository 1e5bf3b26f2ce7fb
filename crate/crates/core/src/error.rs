use alloc::boxed::Box;
use alloc::string::String;

use crate::algebra::{CoordinateId, Point, Side};

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid value space: {0}")]
    InvalidValueSpace(String),
    #[error("value set {mask:#x} references labels outside a space of {len} labels")]
    UnknownLabel { mask: u64, len: usize },
    #[error("constraint on {0} is empty")]
    EmptyConstraint(CoordinateId),
    #[error("point does not assign a label to {0}")]
    UnderspecifiedPoint(CoordinateId),
    #[error("pieces {first} and {second} overlap (witness {witness})")]
    NotAPartition {
        first: usize,
        second: usize,
        witness: Point,
    },
    #[error("expected a {expected} coordinate, found {found}")]
    SideMismatch { expected: Side, found: Side },
    #[error("malformed feature: {0}")]
    MalformedFeature(String),
    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),
    #[error("stage {stage}: {source}")]
    Stage { stage: usize, source: Box<Error> },
    #[error("events are semantically equal; no separating point exists")]
    NoWitness,
    #[error("value set has measure 1 and cannot shrink a cover")]
    CannotShrink,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coordinate {0} is constrained by the cylinder and is excluded")]
    ExcludedCoordinate(CoordinateId),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("instance too large for exhaustive search: {0}")]
    SizeLimit(String),
    #[error("rectangles {first} and {second} overlap")]
    OverlappingRectangles { first: usize, second: usize },
}
