use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Value subsets are bitmasks, so a space holds at most this many labels.
pub const MAX_LABELS: usize = 64;

/// Index of a label inside its [`ValueSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u8);

impl Label {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A subset of the labels of a value space, as a canonical bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ValueSet(pub u64);

impl ValueSet {
    pub const EMPTY: ValueSet = ValueSet(0);

    pub fn singleton(label: Label) -> Self {
        ValueSet(1u64 << label.0)
    }

    pub fn from_labels<I: IntoIterator<Item = Label>>(labels: I) -> Self {
        labels
            .into_iter()
            .fold(ValueSet::EMPTY, |acc, l| acc.union(ValueSet::singleton(l)))
    }

    pub fn contains(self, label: Label) -> bool {
        label.index() < MAX_LABELS && self.0 & (1u64 << label.0) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn intersect(self, other: ValueSet) -> ValueSet {
        ValueSet(self.0 & other.0)
    }

    pub fn union(self, other: ValueSet) -> ValueSet {
        ValueSet(self.0 | other.0)
    }

    /// `self ∖ other`.
    pub fn minus(self, other: ValueSet) -> ValueSet {
        ValueSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ValueSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Lowest label in the set.
    pub fn first(self) -> Option<Label> {
        if self.0 == 0 {
            None
        } else {
            Some(Label(self.0.trailing_zeros() as u8))
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Label> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as u8;
            bits &= bits - 1;
            Some(Label(i))
        })
    }
}

/// A finite probability space `(R, 2^R, μ)` with exact rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSpace {
    labels: Vec<String>,
    weights: Vec<Rational>,
}

impl ValueSpace {
    /// Builds a nondegenerate space: at least two labels and at least one
    /// weight strictly between 0 and 1, so the value σ-algebra is not trivial.
    pub fn new(labels: Vec<String>, weights: Vec<Rational>) -> Result<Self> {
        let space = Self::new_degenerate(labels, weights)?;
        if space.labels.len() < 2 {
            return Err(Error::InvalidValueSpace("at least two labels are required".into()));
        }
        let one = Rational::one();
        if !space.weights.iter().any(|w| !w.is_zero() && *w != one) {
            return Err(Error::InvalidValueSpace(
                "some label must have weight strictly between 0 and 1".into(),
            ));
        }
        Ok(space)
    }

    /// Like [`ValueSpace::new`] but accepts point masses and single-label
    /// spaces. Monte Carlo checks use these as their zero-deviation baseline;
    /// the cylinder algebra works unchanged on them.
    pub fn new_degenerate(labels: Vec<String>, weights: Vec<Rational>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidValueSpace("no labels".into()));
        }
        if labels.len() > MAX_LABELS {
            return Err(Error::InvalidValueSpace(format!(
                "{} labels exceed the limit of {MAX_LABELS}",
                labels.len()
            )));
        }
        if labels.len() != weights.len() {
            return Err(Error::InvalidValueSpace(format!(
                "{} labels but {} weights",
                labels.len(),
                weights.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::InvalidValueSpace("empty label".into()));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidValueSpace(format!("duplicate label {l:?}")));
            }
        }
        if let Some(w) = weights.iter().find(|w| *w < &Rational::zero()) {
            return Err(Error::InvalidValueSpace(format!("negative weight {w}")));
        }
        let sum: Rational = weights.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidValueSpace(format!("weights sum {sum} ≠ 1")));
        }
        Ok(ValueSpace { labels, weights })
    }

    /// `n` labels `"0"`, `"1"`, … with equal weights.
    pub fn uniform(n: usize) -> Result<Self> {
        let labels = (0..n).map(|i| format!("{i}")).collect();
        let w = Rational::new(BigInt::one(), BigInt::from(n.max(1)));
        Self::new(labels, alloc::vec![w; n])
    }

    /// Labels `"0"`, `"1"` with weights `1 - p`, `p`.
    pub fn bernoulli(p: Rational) -> Result<Self> {
        let q = Rational::one() - &p;
        Self::new(alloc::vec!["0".into(), "1".into()], alloc::vec![q, p])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        (0..self.labels.len()).map(|i| Label(i as u8))
    }

    pub fn names(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn name(&self, label: Label) -> &str {
        &self.labels[label.index()]
    }

    pub fn label(&self, name: &str) -> Option<Label> {
        self.labels
            .iter()
            .position(|l| l == name)
            .map(|i| Label(i as u8))
    }

    pub fn has_label(&self, label: Label) -> bool {
        label.index() < self.labels.len()
    }

    pub fn weight(&self, label: Label) -> &Rational {
        &self.weights[label.index()]
    }

    /// The whole label set `R`.
    pub fn full(&self) -> ValueSet {
        if self.labels.len() == MAX_LABELS {
            ValueSet(u64::MAX)
        } else {
            ValueSet((1u64 << self.labels.len()) - 1)
        }
    }

    pub fn check_set(&self, set: ValueSet) -> Result<()> {
        if set.is_subset(self.full()) {
            Ok(())
        } else {
            Err(Error::UnknownLabel {
                mask: set.0,
                len: self.labels.len(),
            })
        }
    }

    /// `μ(set)`.
    pub fn measure(&self, set: ValueSet) -> Result<Rational> {
        self.check_set(set)?;
        Ok(set.iter().map(|l| self.weight(l)).sum())
    }

    /// `R ∖ set`.
    pub fn complement(&self, set: ValueSet) -> ValueSet {
        self.full().minus(set)
    }

    pub fn display_set(&self, set: ValueSet) -> DisplaySet<'_> {
        DisplaySet { space: self, set }
    }
}

/// Renders a value set as `{a,b}` using label names.
pub struct DisplaySet<'a> {
    space: &'a ValueSpace,
    set: ValueSet,
}

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match self.space.labels.get(l.index()) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "#{}", l.0)?,
            }
        }
        f.write_str("}")
    }
}

/// Maps uniform 64-bit words to labels with probabilities equal to the
/// weights, up to the 2^-64 rounding of each cumulative boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sampler {
    // upper cumulative boundary of each label, scaled by 2^64
    bounds: Vec<u128>,
}

impl Sampler {
    pub fn new(space: &ValueSpace) -> Self {
        let scale = Rational::from_integer(BigInt::one() << 64);
        let mut cum = Rational::zero();
        let bounds = space
            .weights
            .iter()
            .map(|w| {
                cum += w;
                (&cum * &scale).floor().to_integer().to_u128().unwrap_or(u128::MAX)
            })
            .collect();
        Sampler { bounds }
    }

    pub fn sample(&self, word: u64) -> Label {
        let w = word as u128;
        let i = self.bounds.partition_point(|&b| b <= w);
        // the last bound is exactly 2^64 > w, so i is in range
        Label(i.min(self.bounds.len() - 1) as u8)
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }
}
