//! The algebra of cylinder unions and its product measure.
//!
//! A cylinder constrains finitely many coordinates of `R^Θ` (or `R^Ω`) to
//! nonempty value subsets and leaves every other coordinate free. Finite
//! disjoint unions of cylinders form an algebra; the Kolmogorov measure of a
//! union is the sum over its pieces of the product of the constrained weights.
//! All measures are exact rationals.

mod cylinder;
mod event;
mod value;

pub use cylinder::{partition_measure, CoordinateId, CylinderSpec, Point, Side};
pub use event::{refine, AlgebraEvent, Refinement};
pub use value::{Label, Sampler, ValueSet, ValueSpace, MAX_LABELS};

/// Exact rational with unbounded numerator and denominator.
pub type Rational = num_rational::BigRational;

pub(crate) fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}
