use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;

use super::cylinder::check_disjoint;
use super::{CoordinateId, CylinderSpec, Point, Rational, Side, ValueSpace};
use crate::error::{Error, Result};

/// An element of the cylinder algebra: a finite list of pairwise disjoint
/// cylinders on one side.
///
/// Pieces are unordered and the representation is not canonical. Two events
/// are equal as sets iff refining one against the other leaves both
/// differences empty (see [`AlgebraEvent::same_set`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraEvent {
    side: Side,
    pieces: Vec<CylinderSpec>,
}

/// Common refinement of two events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub only_first: AlgebraEvent,
    pub both: AlgebraEvent,
    pub only_second: AlgebraEvent,
}

impl Refinement {
    /// `first ∪ second` as the disjoint union of the three parts.
    pub fn union(&self) -> AlgebraEvent {
        let mut pieces = self.only_first.pieces.clone();
        pieces.extend(self.both.pieces.iter().cloned());
        pieces.extend(self.only_second.pieces.iter().cloned());
        AlgebraEvent::from_disjoint(self.both.side, pieces)
    }
}

impl AlgebraEvent {
    /// Checks that every piece lies on `side` and that pieces are pairwise
    /// disjoint.
    pub fn new(side: Side, pieces: Vec<CylinderSpec>) -> Result<Self> {
        if let Some(p) = pieces.iter().find(|p| p.side() != side) {
            return Err(Error::SideMismatch {
                expected: side,
                found: p.side(),
            });
        }
        check_disjoint(&pieces)?;
        Ok(AlgebraEvent { side, pieces })
    }

    pub(crate) fn from_disjoint(side: Side, pieces: Vec<CylinderSpec>) -> Self {
        debug_assert!(check_disjoint(&pieces).is_ok());
        AlgebraEvent { side, pieces }
    }

    pub fn empty(side: Side) -> Self {
        AlgebraEvent {
            side,
            pieces: Vec::new(),
        }
    }

    pub fn full(side: Side) -> Self {
        Self::from_cylinder(CylinderSpec::full(side))
    }

    pub fn from_cylinder(cyl: CylinderSpec) -> Self {
        AlgebraEvent {
            side: cyl.side(),
            pieces: alloc::vec![cyl],
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn pieces(&self) -> &[CylinderSpec] {
        &self.pieces
    }

    pub fn into_pieces(self) -> Vec<CylinderSpec> {
        self.pieces
    }

    /// True iff the event is the empty set. Every piece has nonempty
    /// constraints, so this is exactly "no pieces".
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `κ` of the event: the sum of the piece measures.
    pub fn measure(&self, space: &ValueSpace) -> Result<Rational> {
        self.pieces
            .iter()
            .try_fold(Rational::zero(), |acc, p| Ok(acc + p.measure(space)?))
    }

    /// Coordinates constrained by some piece. Membership depends on these
    /// coordinates only.
    pub fn support(&self) -> BTreeSet<CoordinateId> {
        self.pieces.iter().flat_map(|p| p.coordinates()).collect()
    }

    pub fn contains(&self, point: &Point) -> Result<bool> {
        for p in &self.pieces {
            if p.contains(point)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn same_side(&self, other: &AlgebraEvent) -> Result<()> {
        if self.side == other.side {
            Ok(())
        } else {
            Err(Error::SideMismatch {
                expected: self.side,
                found: other.side,
            })
        }
    }

    pub fn intersection(&self, other: &AlgebraEvent) -> Result<AlgebraEvent> {
        self.same_side(other)?;
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                if let Some(c) = a.intersect(b)? {
                    pieces.push(c);
                }
            }
        }
        Ok(AlgebraEvent::from_disjoint(self.side, pieces))
    }

    pub fn difference(&self, other: &AlgebraEvent, space: &ValueSpace) -> Result<AlgebraEvent> {
        self.same_side(other)?;
        let mut out = Vec::new();
        for a in &self.pieces {
            let mut frontier = alloc::vec![a.clone()];
            for b in &other.pieces {
                let mut next = Vec::new();
                for f in &frontier {
                    next.extend(f.subtract(b, space)?);
                }
                frontier = next;
                if frontier.is_empty() {
                    break;
                }
            }
            out.extend(frontier);
        }
        Ok(AlgebraEvent::from_disjoint(self.side, out))
    }

    pub fn complement(&self, space: &ValueSpace) -> Result<AlgebraEvent> {
        AlgebraEvent::full(self.side).difference(self, space)
    }

    pub fn union(&self, other: &AlgebraEvent, space: &ValueSpace) -> Result<AlgebraEvent> {
        Ok(refine(self, other, space)?.union())
    }

    pub fn is_subset(&self, other: &AlgebraEvent, space: &ValueSpace) -> Result<bool> {
        Ok(self.difference(other, space)?.is_empty())
    }

    pub fn same_set(&self, other: &AlgebraEvent, space: &ValueSpace) -> Result<bool> {
        Ok(self.is_subset(other, space)? && other.is_subset(self, space)?)
    }

    /// Splits piece `index` on coordinate `coord` into the parts inside and
    /// outside `part`, keeping the event unchanged as a set.
    pub fn split_piece(
        &mut self,
        index: usize,
        coord: u64,
        part: super::ValueSet,
        space: &ValueSpace,
    ) -> Result<()> {
        space.check_set(part)?;
        let piece = self.pieces.swap_remove(index);
        let here = piece.constraint(coord).unwrap_or(space.full());
        for s in [here.intersect(part), here.minus(part)] {
            if !s.is_empty() {
                self.pieces.push(piece.clone().with(coord, s)?);
            }
        }
        Ok(())
    }
}

/// Splits two events into `A ∖ B`, `A ∩ B` and `B ∖ A`.
pub fn refine(a: &AlgebraEvent, b: &AlgebraEvent, space: &ValueSpace) -> Result<Refinement> {
    Ok(Refinement {
        only_first: a.difference(b, space)?,
        both: a.intersection(b)?,
        only_second: b.difference(a, space)?,
    })
}
