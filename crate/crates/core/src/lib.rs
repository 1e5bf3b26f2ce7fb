//! Exact, desk-scale machinery for homogeneous sample-distribution limits.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: finite value spaces, cylinders over `R^Θ` / `R^Ω`, the
//!   algebra of finite disjoint cylinder unions and its Kolmogorov product
//!   measure, all in exact rational arithmetic.
//! * [`forcing`]: partial functions `Ω × Θ → R`, row/column/point features,
//!   and the stage-by-stage forcing construction that lazily extends a
//!   rich function.
//! * [`limit`]: pullback events `{ω | φ_ω ∈ X}` with their measures,
//!   separation witnesses, null covers and the exact homogeneity identity.
//! * [`verify`]: empirical distributions, Monte Carlo checks, exhaustive
//!   searches and the rectangle-approximation oracle.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod algebra;
mod error;
pub mod forcing;
pub mod limit;
pub mod rng;
pub mod verify;

pub use algebra::{
    partition_measure, refine, AlgebraEvent, CoordinateId, CylinderSpec, Label, Point, Rational,
    Refinement, Side, ValueSet, ValueSpace,
};
pub use error::{Error, Result};
pub use forcing::{Feature, ForcingStore, StageReport, ValueSequence};
pub use limit::{Membership, PulledEvent};
