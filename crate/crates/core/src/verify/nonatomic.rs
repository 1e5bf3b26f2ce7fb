use num_traits::{One, Zero};

use crate::algebra::{AlgebraEvent, CoordinateId, CylinderSpec, Rational, ValueSet, ValueSpace};
use crate::error::{Error, Result};

/// A strictly smaller, strictly positive sub-event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub event: AlgebraEvent,
    pub parent: Rational,
    pub measure: Rational,
}

/// `A ∩ {ω* ∈ B}` for a coordinate `ω*` outside the support of `A`. Its
/// measure is `ν(A)·μ(B)`, strictly between 0 and `ν(A)` when
/// `0 < μ(B) < 1`.
pub fn nonatomic_split(
    event: &AlgebraEvent,
    set: ValueSet,
    star: CoordinateId,
    space: &ValueSpace,
) -> Result<Split> {
    let mu = space.measure(set)?;
    if mu.is_zero() || mu.is_one() {
        return Err(Error::HypothesisViolation(alloc::format!(
            "μ(B) = {mu} is not strictly between 0 and 1"
        )));
    }
    if star.side != event.side() {
        return Err(Error::SideMismatch {
            expected: event.side(),
            found: star.side,
        });
    }
    if event.support().contains(&star) {
        return Err(Error::ExcludedCoordinate(star));
    }
    let parent = event.measure(space)?;
    if parent.is_zero() {
        return Err(Error::HypothesisViolation("ν(A) = 0".into()));
    }
    let pin = AlgebraEvent::from_cylinder(CylinderSpec::full(event.side()).with(star.index, set)?);
    let sub = event.intersection(&pin)?;
    let measure = sub.measure(space)?;
    if measure != &parent * &mu || !(measure > Rational::zero() && measure < parent) {
        return Err(Error::InternalConsistency(alloc::format!(
            "split measure {measure} is not ν(A)μ(B) = {}",
            &parent * &mu
        )));
    }
    Ok(Split {
        event: sub,
        parent,
        measure,
    })
}
