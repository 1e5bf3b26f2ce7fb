//! Pulling the cylinder algebra back along a (partially forced) rich function.
//!
//! An event `X` of `R^Θ` pulls back to `Ψ_Ω(X) = {ω | φ_ω ∈ X}` and gets
//! measure `π(Ψ_Ω(X)) = κ(X)`; dually an event of `R^Ω` pulls back to a set of
//! columns with measure `ν`. Events are kept as their algebra preimages, and
//! membership of a concrete row or column is read off a [`ForcingStore`].

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::{
    refine, AlgebraEvent, CoordinateId, CylinderSpec, Label, Rational, Side, ValueSet, ValueSpace,
};
use crate::error::{Error, Result};
use crate::forcing::{Feature, ForcingStore, ValueSequence};

/// Three-valued membership: the store may not define every coordinate an
/// event looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    /// Some coordinate that could decide the answer is still undefined.
    Undetermined,
}

/// `Ψ(source)`: the rows (for a `Θ`-side source) or columns (for an `Ω`-side
/// source) whose section lies in `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PulledEvent {
    source: AlgebraEvent,
}

impl PulledEvent {
    pub fn new(source: AlgebraEvent) -> Self {
        PulledEvent { source }
    }

    pub fn source(&self) -> &AlgebraEvent {
        &self.source
    }

    /// The index set the pulled event is a subset of.
    pub fn index_side(&self) -> Side {
        self.source.side().dual()
    }

    /// `π` (or `ν`) of the pulled event, which is `κ` of its source.
    pub fn measure(&self, space: &ValueSpace) -> Result<Rational> {
        self.source.measure(space)
    }

    /// Whether the section of `id` lies in the source event. A piece rejects
    /// as soon as one defined coordinate violates it; the answer is
    /// [`Membership::Undetermined`] only when undefined coordinates could
    /// still change it.
    pub fn member(&self, id: CoordinateId, store: &ForcingStore) -> Result<Membership> {
        if id.side != self.index_side() {
            return Err(Error::SideMismatch {
                expected: self.index_side(),
                found: id.side,
            });
        }
        let value = |coord: u64| match id.side {
            Side::Omega => store.eval(id.index, coord),
            Side::Theta => store.eval(coord, id.index),
        };
        let mut undetermined = false;
        for piece in self.source.pieces() {
            let mut rejected = false;
            let mut missing = false;
            for (coord, set) in piece.constraints() {
                match value(coord) {
                    Some(l) if !set.contains(l) => {
                        rejected = true;
                        break;
                    }
                    Some(_) => {}
                    None => missing = true,
                }
            }
            if rejected {
                continue;
            }
            if !missing {
                return Ok(Membership::In);
            }
            undetermined = true;
        }
        Ok(if undetermined {
            Membership::Undetermined
        } else {
            Membership::Out
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichEvent {
    First,
    Second,
}

/// A forced row (or column) lying in exactly one of two events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub witness: CoordinateId,
    /// The event that contains the witness.
    pub inside: WhichEvent,
    /// The pattern forced along the union of both supports.
    pub pattern: Vec<(u64, Label)>,
}

/// Forces a fresh row (for `Θ`-side events) or column (for `Ω`-side events)
/// whose section lies in `x ∖ y`, or in `y ∖ x` when `x ⊂ y`.
pub fn separation_witness(
    x: &AlgebraEvent,
    y: &AlgebraEvent,
    store: &mut ForcingStore,
    space: &ValueSpace,
) -> Result<Separation> {
    let parts = refine(x, y, space)?;
    let (piece, inside) = if let Some(p) = parts.only_first.pieces().first() {
        (p, WhichEvent::First)
    } else if let Some(p) = parts.only_second.pieces().first() {
        (p, WhichEvent::Second)
    } else {
        return Err(Error::NoWitness);
    };
    let mut coords: Vec<u64> = x.support().into_iter().map(|c| c.index).collect();
    coords.extend(y.support().into_iter().map(|c| c.index));
    coords.sort_unstable();
    coords.dedup();
    let pattern: Vec<(u64, Label)> = coords
        .iter()
        .map(|&c| {
            let l = piece.constraint(c).and_then(ValueSet::first).unwrap_or(Label(0));
            (c, l)
        })
        .collect();
    let values = ValueSequence::Explicit(pattern.iter().map(|&(_, l)| l).collect());
    let feature = match x.side() {
        Side::Theta => Feature::Row {
            values,
            thetas: coords.clone(),
        },
        Side::Omega => Feature::Col {
            values,
            omegas: coords.clone(),
        },
    };
    let witness = store
        .force(&feature, coords.len())?
        .witness
        .ok_or_else(|| Error::InternalConsistency("pattern feature without witness".into()))?;
    let (yes, no) = match inside {
        WhichEvent::First => (x, y),
        WhichEvent::Second => (y, x),
    };
    let in_yes = PulledEvent::new(yes.clone()).member(witness, store)?;
    let in_no = PulledEvent::new(no.clone()).member(witness, store)?;
    if in_yes != Membership::In || in_no != Membership::Out {
        return Err(Error::InternalConsistency(alloc::format!(
            "witness {witness} does not separate the events ({in_yes:?}, {in_no:?})"
        )));
    }
    Ok(Separation {
        witness,
        inside,
        pattern,
    })
}

/// An event containing a given row with measure below a threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullCover {
    pub event: PulledEvent,
    /// Number of level-set columns pinned.
    pub n: usize,
    /// `μ(X)^n`.
    pub measure: Rational,
    pub thetas: Vec<u64>,
}

/// Covers row `omega` by `Ψ_Ω` of the cylinder pinning `n` fresh columns of
/// the level set `{θ | φ(ω, θ) = r}` to `X`, with `n` least such that
/// `μ(X)^n < x`.
pub fn null_cover(
    store: &mut ForcingStore,
    omega: u64,
    x: &Rational,
    set: ValueSet,
    r: Label,
    space: &ValueSpace,
) -> Result<NullCover> {
    if *x <= Rational::zero() {
        return Err(Error::Domain(alloc::format!("threshold {x} must be positive")));
    }
    let mu = space.measure(set)?;
    if !set.contains(r) {
        return Err(Error::Domain(alloc::format!(
            "label {} is not in the cover set",
            space.name(r)
        )));
    }
    if mu.is_one() {
        return Err(Error::CannotShrink);
    }
    let mut n = 0usize;
    let mut power = Rational::one();
    while power >= *x {
        power *= &mu;
        n += 1;
    }
    let thetas = if n == 0 {
        Vec::new()
    } else {
        store.level_set_extend(omega, r, n)?
    };
    let cyl = CylinderSpec::from_constraints(Side::Theta, thetas.iter().map(|&t| (t, set)))?;
    let event = PulledEvent::new(AlgebraEvent::from_cylinder(cyl));
    let measure = event.measure(space)?;
    if measure != power || measure >= *x {
        return Err(Error::InternalConsistency("cover measure mismatch".into()));
    }
    if event.member(CoordinateId::omega(omega), store)? != Membership::In {
        return Err(Error::InternalConsistency(alloc::format!(
            "w{omega} is not in its own cover"
        )));
    }
    Ok(NullCover {
        event,
        n,
        measure,
        thetas,
    })
}

/// Exact `κ(α#)`, `κ(β#)`, `κ(γ#)` for `β` pinning the extra coordinate to
/// `B` and `γ = α` with that pin added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityIdentity {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    /// `α# ∩ β# = γ#` and `κ(γ#) = κ(α#)·κ(β#)`.
    pub holds: bool,
}

/// Checks `ν(A ∩ φ_{ω*}⁻¹(B)) = ν(A) μ(B)` for `A = Ψ(α#)`, for any `ω*`
/// outside the coordinates `α` restricts.
pub fn homogeneity_exact(
    alpha: &CylinderSpec,
    set: ValueSet,
    star: CoordinateId,
    space: &ValueSpace,
) -> Result<HomogeneityIdentity> {
    if star.side != alpha.side() {
        return Err(Error::SideMismatch {
            expected: alpha.side(),
            found: star.side,
        });
    }
    if set.is_empty() {
        return Err(Error::Domain("value set B is empty".into()));
    }
    space.check_set(set)?;
    alpha.check(space)?;
    if alpha.restricted(space).any(|i| i == star.index) {
        return Err(Error::ExcludedCoordinate(star));
    }
    let beta = CylinderSpec::full(alpha.side()).with(star.index, set)?;
    let gamma = alpha.clone().with(star.index, set)?;
    let structural = match alpha.intersect(&beta)? {
        Some(c) => c.normalized(space) == gamma.normalized(space),
        None => false,
    };
    let (ka, kb, kg) = (
        alpha.measure(space)?,
        beta.measure(space)?,
        gamma.measure(space)?,
    );
    let holds = structural && kg == &ka * &kb;
    Ok(HomogeneityIdentity {
        alpha: ka,
        beta: kb,
        gamma: kg,
        holds,
    })
}

/// The identity for a finite disjoint union of cylinders, computed two ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventHomogeneity {
    pub event: Rational,
    pub beta: Rational,
    /// Sum of the per-piece `κ(γ_i#)`.
    pub piecewise: Rational,
    /// `κ(A ∩ β#)` from the event intersection.
    pub intersection: Rational,
    pub holds: bool,
}

pub fn homogeneity_exact_event(
    event: &AlgebraEvent,
    set: ValueSet,
    star: CoordinateId,
    space: &ValueSpace,
) -> Result<EventHomogeneity> {
    if star.side != event.side() {
        return Err(Error::SideMismatch {
            expected: event.side(),
            found: star.side,
        });
    }
    let mut piecewise = Rational::zero();
    let mut all_hold = true;
    for piece in event.pieces() {
        let id = homogeneity_exact(piece, set, star, space)?;
        all_hold &= id.holds;
        piecewise += id.gamma;
    }
    let beta_cyl = CylinderSpec::full(event.side()).with(star.index, set)?;
    let beta = beta_cyl.measure(space)?;
    let intersection = event
        .intersection(&AlgebraEvent::from_cylinder(beta_cyl))?
        .measure(space)?;
    let total = event.measure(space)?;
    let expected = &total * &beta;
    let holds = all_hold && piecewise == expected && intersection == expected;
    Ok(EventHomogeneity {
        event: total,
        beta,
        piecewise,
        intersection,
        holds,
    })
}
