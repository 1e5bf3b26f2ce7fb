use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::{Label, Rational, ValueSet, ValueSpace};
use crate::error::{Error, Result};

/// Which index set a coordinate belongs to. `Θ` coordinates index `R^Θ`,
/// `Ω` coordinates index `R^Ω`; the two namespaces never mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Theta,
    Omega,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::Theta => Side::Omega,
            Side::Omega => Side::Theta,
        }
    }

    pub fn prefix(self) -> char {
        match self {
            Side::Theta => 't',
            Side::Omega => 'w',
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Theta => "theta",
            Side::Omega => "omega",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordinateId {
    pub side: Side,
    pub index: u64,
}

impl CoordinateId {
    pub fn theta(index: u64) -> Self {
        CoordinateId {
            side: Side::Theta,
            index,
        }
    }

    pub fn omega(index: u64) -> Self {
        CoordinateId {
            side: Side::Omega,
            index,
        }
    }
}

impl fmt::Display for CoordinateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side.prefix(), self.index)
    }
}

/// A finite assignment of labels to coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Point(pub BTreeMap<CoordinateId, Label>);

impl Point {
    pub fn new() -> Self {
        Point(BTreeMap::new())
    }

    pub fn with(mut self, coord: CoordinateId, label: Label) -> Self {
        self.0.insert(coord, label);
        self
    }

    pub fn get(&self, coord: CoordinateId) -> Option<Label> {
        self.0.get(&coord).copied()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (c, l)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}↦#{}", l.0)?;
        }
        f.write_str("}")
    }
}

/// A cylinder `α#`: finitely many coordinates pinned to nonempty value sets,
/// every other coordinate free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CylinderSpec {
    side: Side,
    constraints: BTreeMap<u64, ValueSet>,
}

impl CylinderSpec {
    /// The unconstrained cylinder, i.e. the whole product space.
    pub fn full(side: Side) -> Self {
        CylinderSpec {
            side,
            constraints: BTreeMap::new(),
        }
    }

    pub fn from_constraints<I>(side: Side, constraints: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, ValueSet)>,
    {
        let mut cyl = CylinderSpec::full(side);
        for (index, set) in constraints {
            cyl = cyl.with(index, set)?;
        }
        Ok(cyl)
    }

    /// Adds (or replaces) the constraint on `index`.
    pub fn with(mut self, index: u64, set: ValueSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptyConstraint(CoordinateId {
                side: self.side,
                index,
            }));
        }
        self.constraints.insert(index, set);
        Ok(self)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn constraint(&self, index: u64) -> Option<ValueSet> {
        self.constraints.get(&index).copied()
    }

    pub fn constraints(&self) -> impl Iterator<Item = (u64, ValueSet)> + '_ {
        self.constraints.iter().map(|(&i, &s)| (i, s))
    }

    pub fn coordinates(&self) -> impl Iterator<Item = CoordinateId> + '_ {
        let side = self.side;
        self.constraints
            .keys()
            .map(move |&index| CoordinateId { side, index })
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Coordinates whose constraint is a proper subset of `R`, i.e. the set
    /// on which the cylinder actually restricts points.
    pub fn restricted(&self, space: &ValueSpace) -> impl Iterator<Item = u64> + '_ {
        let full = space.full();
        self.constraints
            .iter()
            .filter(move |(_, &s)| s != full)
            .map(|(&i, _)| i)
    }

    /// Drops constraints equal to the full label set.
    pub fn normalized(&self, space: &ValueSpace) -> CylinderSpec {
        let full = space.full();
        CylinderSpec {
            side: self.side,
            constraints: self
                .constraints
                .iter()
                .filter(|(_, &s)| s != full)
                .map(|(&i, &s)| (i, s))
                .collect(),
        }
    }

    pub fn check(&self, space: &ValueSpace) -> Result<()> {
        self.constraints
            .values()
            .try_for_each(|&s| space.check_set(s))
    }

    /// Membership of a point: every constrained coordinate must carry a
    /// label in its constraint set. Unconstrained coordinates never reject.
    pub fn contains(&self, point: &Point) -> Result<bool> {
        for c in self.coordinates() {
            match point.get(c) {
                None => return Err(Error::UnderspecifiedPoint(c)),
                Some(l) if !self.constraints[&c.index].contains(l) => return Ok(false),
                Some(_) => {}
            }
        }
        Ok(true)
    }

    /// `κ(α#) = Π μ(α(θ))` over the constrained coordinates.
    pub fn measure(&self, space: &ValueSpace) -> Result<Rational> {
        let mut m = Rational::one();
        for &s in self.constraints.values() {
            m *= space.measure(s)?;
        }
        Ok(m)
    }

    fn same_side(&self, other: &CylinderSpec) -> Result<()> {
        if self.side == other.side {
            Ok(())
        } else {
            Err(Error::SideMismatch {
                expected: self.side,
                found: other.side,
            })
        }
    }

    /// Constraint-wise intersection; `None` when it is empty.
    pub fn intersect(&self, other: &CylinderSpec) -> Result<Option<CylinderSpec>> {
        self.same_side(other)?;
        let mut out = self.clone();
        for (&i, &s) in &other.constraints {
            let merged = match out.constraints.get(&i) {
                Some(&t) => t.intersect(s),
                None => s,
            };
            if merged.is_empty() {
                return Ok(None);
            }
            out.constraints.insert(i, merged);
        }
        Ok(Some(out))
    }

    /// A point lying in both cylinders, if they overlap.
    pub fn overlap_witness(&self, other: &CylinderSpec) -> Result<Option<Point>> {
        Ok(self.intersect(other)?.map(|c| c.representative()))
    }

    /// The point assigning each constrained coordinate its lowest allowed
    /// label.
    pub fn representative(&self) -> Point {
        Point(
            self.coordinates()
                .map(|c| (c, self.constraints[&c.index].first().expect("nonempty")))
                .collect(),
        )
    }

    /// `self ∖ other` as disjoint cylinders, splitting on the first of
    /// `other`'s coordinates where a point escapes its constraint.
    pub fn subtract(&self, other: &CylinderSpec, space: &ValueSpace) -> Result<Vec<CylinderSpec>> {
        self.same_side(other)?;
        if self.intersect(other)?.is_none() {
            return Ok(alloc::vec![self.clone()]);
        }
        let mut pieces = Vec::new();
        let mut current = self.clone();
        for (&i, &s) in &other.constraints {
            let here = current.constraints.get(&i).copied().unwrap_or(space.full());
            let escape = here.minus(s);
            if !escape.is_empty() {
                let mut piece = current.clone();
                piece.constraints.insert(i, escape);
                pieces.push(piece);
            }
            // nonempty: the cylinders intersect
            current.constraints.insert(i, here.intersect(s));
        }
        Ok(pieces)
    }
}

/// Sum of piece measures after checking the pieces are pairwise disjoint.
/// The result does not depend on which partition of a set is supplied.
pub fn partition_measure(pieces: &[CylinderSpec], space: &ValueSpace) -> Result<Rational> {
    check_disjoint(pieces)?;
    pieces
        .iter()
        .try_fold(Rational::zero(), |acc, p| Ok(acc + p.measure(space)?))
}

pub(crate) fn check_disjoint(pieces: &[CylinderSpec]) -> Result<()> {
    for (i, a) in pieces.iter().enumerate() {
        for (j, b) in pieces.iter().enumerate().skip(i + 1) {
            if let Some(witness) = a.overlap_witness(b)? {
                return Err(Error::NotAPartition {
                    first: i,
                    second: j,
                    witness,
                });
            }
        }
    }
    Ok(())
}
