//! Forcing a rich function one feature at a time.
//!
//! A [`ForcingStore`] is a partial function `p : Ω × Θ → R`. Each call to
//! [`ForcingStore::force`] takes one feature (a row pattern, a column pattern
//! or a single point) and extends `p` outside its current domain so that the
//! extension forces that feature:
//!
//! * row `(h, f)`: some `ω` has `p(ω, f(n)) = h(n)` for every `n`;
//! * column `(h, g)`: some `θ` has `p(g(n), θ) = h(n)` for every `n`;
//! * point `(ω, θ)`: `p(ω, θ)` is defined.
//!
//! Stages only ever add points, so the sequence of stores is nested. Row and
//! column patterns may carry a generator for `h`; the first `L` values are
//! stored and the rest are computed from the generator when read.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{CoordinateId, Label, Sampler, ValueSpace};
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

/// A sequence `h ∈ R^ℕ`, either listed or generated on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueSequence {
    Explicit(Vec<Label>),
    Constant(Label),
    /// `h(n) = period[n mod len]`.
    Periodic(Vec<Label>),
    /// `h(n)` drawn from `μ` with the `n`-th word of a keyed stream.
    Seeded { seed: u64, sampler: Sampler },
}

impl ValueSequence {
    pub fn seeded(seed: u64, space: &ValueSpace) -> Self {
        ValueSequence::Seeded {
            seed,
            sampler: Sampler::new(space),
        }
    }

    pub fn get(&self, n: usize) -> Option<Label> {
        match self {
            ValueSequence::Explicit(v) => v.get(n).copied(),
            ValueSequence::Constant(l) => Some(*l),
            ValueSequence::Periodic(p) if p.is_empty() => None,
            ValueSequence::Periodic(p) => Some(p[n % p.len()]),
            ValueSequence::Seeded { seed, sampler } => {
                Some(sampler.sample(rng::word(*seed, Purpose::ValueSequence, 0, n as u64)))
            }
        }
    }

    /// Number of defined terms, `None` when the sequence is unbounded.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            ValueSequence::Explicit(v) => Some(v.len()),
            _ => None,
        }
    }

    fn check(&self, label_count: usize) -> Result<()> {
        let bad = |l: &Label| l.index() >= label_count;
        let ok = match self {
            ValueSequence::Explicit(v) => !v.iter().any(bad),
            ValueSequence::Constant(l) => !bad(l),
            ValueSequence::Periodic(p) => !p.is_empty() && !p.iter().any(bad),
            ValueSequence::Seeded { sampler, .. } => sampler.len() == label_count,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedFeature(format!(
                "value sequence {self:?} does not fit a space of {label_count} labels"
            )))
        }
    }
}

/// One demand on the function being built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feature {
    /// Some row must read `values` along the injective column list `thetas`.
    Row {
        values: ValueSequence,
        thetas: Vec<u64>,
    },
    /// Some column must read `values` along the injective row list `omegas`.
    Col {
        values: ValueSequence,
        omegas: Vec<u64>,
    },
    Point { omega: u64, theta: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Row,
    Col,
    Point,
}

impl core::fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            FeatureKind::Row => "ROW",
            FeatureKind::Col => "COL",
            FeatureKind::Point => "POINT",
        })
    }
}

impl Feature {
    pub fn kind(&self) -> FeatureKind {
        match self {
            Feature::Row { .. } => FeatureKind::Row,
            Feature::Col { .. } => FeatureKind::Col,
            Feature::Point { .. } => FeatureKind::Point,
        }
    }

    fn check(&self, label_count: usize) -> Result<()> {
        let (values, ids) = match self {
            Feature::Row { values, thetas } => (values, thetas),
            Feature::Col { values, omegas } => (values, omegas),
            Feature::Point { .. } => return Ok(()),
        };
        values.check(label_count)?;
        let distinct: BTreeSet<_> = ids.iter().collect();
        if distinct.len() != ids.len() {
            return Err(Error::MalformedFeature(format!(
                "{} index list is not injective",
                self.kind()
            )));
        }
        if let Some(n) = values.finite_len() {
            if n < ids.len() {
                return Err(Error::MalformedFeature(format!(
                    "{} values for {} indices",
                    n,
                    ids.len()
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of one forcing stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    pub stage: usize,
    pub kind: FeatureKind,
    /// The fresh row (for `Row`) or column (for `Col`) that carries the
    /// pattern.
    pub witness: Option<CoordinateId>,
    /// New points whose value was stored.
    pub materialized: usize,
    /// New points whose value is produced by the generator when read.
    pub deferred: usize,
    /// The store forces the feature after this stage.
    pub forced: bool,
    /// The store before this stage is a subset of the store after it.
    pub nested: bool,
}

impl StageReport {
    pub fn added(&self) -> usize {
        self.materialized + self.deferred
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Set(Label),
    Deferred { line: u32, n: u32 },
}

/// The partial function `p` with its domain projections and stage journal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingStore {
    cells: BTreeMap<(u64, u64), Cell>,
    // θ ↦ every ω with (ω, θ) in the domain
    by_col: BTreeMap<u64, Vec<u64>>,
    rows: BTreeSet<u64>,
    cols: BTreeSet<u64>,
    lines: Vec<ValueSequence>,
    next_omega: u64,
    next_theta: u64,
    label_count: usize,
    default_label: Label,
    journal: Vec<StageReport>,
}

impl ForcingStore {
    /// Empty store whose point features default to the first label.
    pub fn new(space: &ValueSpace) -> Self {
        ForcingStore {
            cells: BTreeMap::new(),
            by_col: BTreeMap::new(),
            rows: BTreeSet::new(),
            cols: BTreeSet::new(),
            lines: Vec::new(),
            next_omega: 0,
            next_theta: 0,
            label_count: space.len(),
            default_label: Label(0),
            journal: Vec::new(),
        }
    }

    pub fn with_default(mut self, label: Label) -> Result<Self> {
        if label.index() >= self.label_count {
            return Err(Error::Domain(format!("default label #{} out of range", label.0)));
        }
        self.default_label = label;
        Ok(self)
    }

    pub fn default_label(&self) -> Label {
        self.default_label
    }

    /// `p(ω, θ)`, or `None` outside the domain.
    pub fn eval(&self, omega: u64, theta: u64) -> Option<Label> {
        match *self.cells.get(&(omega, theta))? {
            Cell::Set(l) => Some(l),
            Cell::Deferred { line, n } => self.lines[line as usize].get(n as usize),
        }
    }

    pub fn is_defined(&self, omega: u64, theta: u64) -> bool {
        self.cells.contains_key(&(omega, theta))
    }

    /// Size of `D(p)`.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn materialized_len(&self) -> usize {
        self.cells
            .values()
            .filter(|c| matches!(c, Cell::Set(_)))
            .count()
    }

    /// `D_Ω(p)`.
    pub fn row_domain(&self) -> &BTreeSet<u64> {
        &self.rows
    }

    /// `D_Θ(p)`.
    pub fn col_domain(&self) -> &BTreeSet<u64> {
        &self.cols
    }

    pub fn journal(&self) -> &[StageReport] {
        &self.journal
    }

    /// Every defined point with its value, in `(ω, θ)` order.
    pub fn assignments(&self) -> impl Iterator<Item = (u64, u64, Label)> + '_ {
        self.cells
            .keys()
            .map(|&(w, t)| (w, t, self.eval(w, t).expect("defined")))
    }

    /// The defined part of row `ω`.
    pub fn row(&self, omega: u64) -> impl Iterator<Item = (u64, Label)> + '_ {
        self.cells
            .range((omega, 0)..=(omega, u64::MAX))
            .map(move |(&(_, t), _)| (t, self.eval(omega, t).expect("defined")))
    }

    fn fresh_omega(&mut self) -> Result<u64> {
        let w = self.next_omega;
        self.next_omega = w
            .checked_add(1)
            .ok_or_else(|| Error::InternalConsistency("row ids exhausted".into()))?;
        if self.rows.contains(&w) {
            return Err(Error::InternalConsistency(format!("fresh row w{w} already in use")));
        }
        Ok(w)
    }

    fn fresh_theta(&mut self) -> Result<u64> {
        let t = self.next_theta;
        self.next_theta = t
            .checked_add(1)
            .ok_or_else(|| Error::InternalConsistency("column ids exhausted".into()))?;
        if self.cols.contains(&t) {
            return Err(Error::InternalConsistency(format!("fresh column t{t} already in use")));
        }
        Ok(t)
    }

    fn note_ids(&mut self, omega: u64, theta: u64) {
        self.next_omega = self.next_omega.max(omega.saturating_add(1));
        self.next_theta = self.next_theta.max(theta.saturating_add(1));
    }

    fn insert(&mut self, omega: u64, theta: u64, cell: Cell) -> Result<()> {
        if self.cells.insert((omega, theta), cell).is_some() {
            return Err(Error::InternalConsistency(format!(
                "(w{omega}, t{theta}) was already defined"
            )));
        }
        self.rows.insert(omega);
        self.cols.insert(theta);
        self.by_col.entry(theta).or_default().push(omega);
        self.note_ids(omega, theta);
        Ok(())
    }

    fn insert_line(
        &mut self,
        values: &ValueSequence,
        ids: &[u64],
        materialize: usize,
        mut key: impl FnMut(u64) -> (u64, u64),
    ) -> Result<(usize, usize)> {
        let stored = materialize.min(ids.len());
        let line = self.lines.len() as u32;
        if stored < ids.len() {
            self.lines.push(values.clone());
        }
        for (n, &id) in ids.iter().enumerate() {
            let (w, t) = key(id);
            let cell = if n < stored {
                Cell::Set(values.get(n).expect("checked length"))
            } else {
                Cell::Deferred { line, n: n as u32 }
            };
            self.insert(w, t, cell)?;
        }
        Ok((stored, ids.len() - stored))
    }

    /// Extends the store so that it forces `feature`, storing at most
    /// `materialize` values of a row or column pattern eagerly.
    pub fn force(&mut self, feature: &Feature, materialize: usize) -> Result<StageReport> {
        feature.check(self.label_count)?;
        let before = self.cells.len();
        let (witness, materialized, deferred) = match feature {
            Feature::Row { values, thetas } => {
                let w = self.fresh_omega()?;
                if self.row(w).next().is_some() {
                    return Err(Error::InternalConsistency(format!("fresh row w{w} is not empty")));
                }
                let (m, d) = self.insert_line(values, thetas, materialize, |t| (w, t))?;
                (Some(CoordinateId::omega(w)), m, d)
            }
            Feature::Col { values, omegas } => {
                let t = self.fresh_theta()?;
                if self.by_col.contains_key(&t) {
                    return Err(Error::InternalConsistency(format!(
                        "fresh column t{t} is not empty"
                    )));
                }
                let (m, d) = self.insert_line(values, omegas, materialize, |w| (w, t))?;
                (Some(CoordinateId::theta(t)), m, d)
            }
            Feature::Point { omega, theta } => {
                if self.is_defined(*omega, *theta) {
                    self.note_ids(*omega, *theta);
                    (None, 0, 0)
                } else {
                    self.insert(*omega, *theta, Cell::Set(self.default_label))?;
                    (None, 1, 0)
                }
            }
        };
        let report = StageReport {
            stage: self.journal.len(),
            kind: feature.kind(),
            witness,
            materialized,
            deferred,
            forced: self.forces(feature),
            nested: self.cells.len() == before + materialized + deferred,
        };
        self.journal.push(report.clone());
        Ok(report)
    }

    /// Whether the current partial function forces `feature`, decided by
    /// scanning the candidate rows or columns.
    pub fn forces(&self, feature: &Feature) -> bool {
        match feature {
            Feature::Row { values, thetas } => {
                let Some(&first) = thetas.first() else {
                    return true;
                };
                let candidates = self.by_col.get(&first).map(Vec::as_slice).unwrap_or(&[]);
                candidates.iter().any(|&w| {
                    thetas
                        .iter()
                        .enumerate()
                        .all(|(n, &t)| self.eval(w, t).is_some() && self.eval(w, t) == values.get(n))
                })
            }
            Feature::Col { values, omegas } => {
                let Some(&first) = omegas.first() else {
                    return true;
                };
                self.row(first).any(|(t, _)| {
                    omegas
                        .iter()
                        .enumerate()
                        .all(|(n, &w)| self.eval(w, t).is_some() && self.eval(w, t) == values.get(n))
                })
            }
            Feature::Point { omega, theta } => self.is_defined(*omega, *theta),
        }
    }

    /// `k` fresh columns `θ_1..θ_k` with `p(ω, θ_i) = r`, each forced as a
    /// column pattern starting with `r` at row `ω`.
    pub fn level_set_extend(&mut self, omega: u64, value: Label, k: usize) -> Result<Vec<u64>> {
        if k == 0 {
            return Err(Error::Domain("level set extension needs k ≥ 1".into()));
        }
        let feature = Feature::Col {
            values: ValueSequence::Explicit(alloc::vec![value]),
            omegas: alloc::vec![omega],
        };
        (0..k)
            .map(|_| {
                let report = self.force(&feature, 1)?;
                match report.witness {
                    Some(c) => Ok(c.index),
                    None => Err(Error::InternalConsistency("column feature without witness".into())),
                }
            })
            .collect()
    }
}

/// Forces each feature in order and returns the reports of this run.
pub fn run_enumeration<'a, I>(
    store: &mut ForcingStore,
    features: I,
    materialize: usize,
) -> Result<Vec<StageReport>>
where
    I: IntoIterator<Item = &'a Feature>,
{
    features
        .into_iter()
        .map(|f| {
            let stage = store.journal.len();
            store.force(f, materialize).map_err(|e| Error::Stage {
                stage,
                source: Box::new(e),
            })
        })
        .collect()
}
