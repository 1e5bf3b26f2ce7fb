use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand_core::RngCore;

use crate::algebra::{Label, Rational, Sampler, ValueSet, ValueSpace};
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

/// An `rows × cols` array of i.i.d. draws from `μ`. Row `i` is the sample
/// function `φ_ω` of the `i`-th row; column `j` is the random vector `φ_θ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Label>,
    seed: Option<u64>,
    space: ValueSpace,
}

impl SampleMatrix {
    /// Entry `(i, j)` is word `j` of stream `i`, so the matrix does not
    /// depend on the order rows are produced in.
    pub fn generate(space: &ValueSpace, rows: usize, cols: usize, seed: u64) -> Self {
        let sampler = Sampler::new(space);
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            entries.extend(Self::sample_row(&sampler, seed, i, cols));
        }
        SampleMatrix {
            rows,
            cols,
            entries,
            seed: Some(seed),
            space: space.clone(),
        }
    }

    /// Row `i` of the matrix generated with `seed`.
    pub fn sample_row(sampler: &Sampler, seed: u64, row: usize, cols: usize) -> Vec<Label> {
        let mut rng = rng::stream(seed, Purpose::SampleMatrix, row as u64);
        (0..cols).map(|_| sampler.sample(rng.next_u64())).collect()
    }

    /// Assembles rows produced by [`SampleMatrix::sample_row`] (or written
    /// out by hand, with `seed = None`).
    pub fn from_rows(space: &ValueSpace, rows: Vec<Vec<Label>>, seed: Option<u64>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("rows have different lengths".into()));
        }
        if rows.iter().flatten().any(|&l| !space.has_label(l)) {
            return Err(Error::Domain("matrix entry outside the value space".into()));
        }
        Ok(SampleMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
            seed,
            space: space.clone(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn space(&self) -> &ValueSpace {
        &self.space
    }

    pub fn get(&self, row: usize, col: usize) -> Label {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Label] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = Label> + '_ {
        (0..self.rows).map(move |i| self.get(i, col))
    }
}

/// Per-label counts of a sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    counts: Vec<u64>,
    n: u64,
}

impl EmpiricalDistribution {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn frequency(&self, label: Label) -> Rational {
        Rational::new(
            BigInt::from(self.counts[label.index()]),
            BigInt::from(self.n),
        )
    }

    pub fn frequencies(&self) -> Vec<Rational> {
        (0..self.counts.len())
            .map(|i| self.frequency(Label(i as u8)))
            .collect()
    }

    /// `max_r |ν_n(r) − μ(r)|`.
    pub fn max_deviation(&self, space: &ValueSpace) -> Rational {
        space
            .labels()
            .map(|l| (self.frequency(l) - space.weight(l)).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

pub fn empirical_dist(sample: &[Label], space: &ValueSpace) -> Result<EmpiricalDistribution> {
    if sample.is_empty() {
        return Err(Error::Domain("empty sample".into()));
    }
    let mut counts = alloc::vec![0u64; space.len()];
    for &l in sample {
        if !space.has_label(l) {
            return Err(Error::UnknownLabel {
                mask: 1u64.checked_shl(l.0 as u32).unwrap_or(0),
                len: space.len(),
            });
        }
        counts[l.index()] += 1;
    }
    Ok(EmpiricalDistribution {
        counts,
        n: sample.len() as u64,
    })
}

/// Hoeffding bound on `P(max_r |ν_n(r) − μ(r)| ≥ ε)`, summed over the labels
/// whose deviation is random. Labels of weight 0 or 1 never deviate; with
/// exactly two random labels their deviations coincide and one term suffices.
pub fn hoeffding_bound(space: &ValueSpace, n: usize, epsilon: f64) -> f64 {
    let random = space
        .weights()
        .iter()
        .filter(|w| !w.is_zero() && !num_traits::One::is_one(*w))
        .count();
    let terms = if random == 2 { 1 } else { random };
    let per_label = 2.0 * libm::exp(-2.0 * n as f64 * epsilon * epsilon);
    (terms as f64 * per_label).min(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcReport {
    pub n: usize,
    pub seed: u64,
    pub epsilon: Rational,
    pub distribution: EmpiricalDistribution,
    pub deviation: Rational,
    pub pass: bool,
    /// Certified probability that a correct sampler fails the test.
    pub false_failure_bound: f64,
}

/// Draws `n` values from `μ` and compares the sample distribution with `μ`
/// atom by atom. Passes iff the largest deviation is below `ε`.
pub fn gc_test(space: &ValueSpace, n: usize, seed: u64, epsilon: &Rational) -> Result<GcReport> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    if !epsilon.is_positive() {
        return Err(Error::Domain(format!("tolerance {epsilon} must be positive")));
    }
    let sampler = Sampler::new(space);
    let mut rng = rng::stream(seed, Purpose::Sample, 0);
    let sample: Vec<Label> = (0..n).map(|_| sampler.sample(rng.next_u64())).collect();
    let distribution = empirical_dist(&sample, space)?;
    let deviation = distribution.max_deviation(space);
    let eps = epsilon.to_f64().unwrap_or(f64::INFINITY);
    Ok(GcReport {
        n,
        seed,
        epsilon: epsilon.clone(),
        pass: deviation < *epsilon,
        false_failure_bound: hoeffding_bound(space, n, eps),
        distribution,
        deviation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDeviation {
    pub row: usize,
    /// Columns of `A` whose entry lies in `B`.
    pub hits: usize,
    pub subset: usize,
    /// `|ν(A ∩ φ_ω⁻¹(B)) − ν(A)μ(B)|` with `ν` the counting measure on all
    /// columns.
    pub deviation: Rational,
    /// The same deviation after normalising `ν` to a probability on `A`.
    pub conditional: Rational,
    /// `conditional < ε`.
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityTable {
    pub rows: Vec<RowDeviation>,
    pub within: usize,
}

impl HomogeneityTable {
    pub fn fraction_within(&self) -> Rational {
        Rational::new(
            BigInt::from(self.within),
            BigInt::from(self.rows.len().max(1)),
        )
    }
}

fn check_columns(m: &SampleMatrix, columns: &[usize]) -> Result<()> {
    if columns.is_empty() {
        return Err(Error::Domain("column subset is empty".into()));
    }
    if let Some(&c) = columns.iter().find(|&&c| c >= m.cols()) {
        return Err(Error::Domain(format!("column {c} out of range")));
    }
    if columns.iter().collect::<BTreeSet<_>>().len() != columns.len() {
        return Err(Error::Domain("column subset has repeated columns".into()));
    }
    Ok(())
}

/// The deviation of one row; `columns` must be a valid subset.
pub fn homogeneity_row(
    m: &SampleMatrix,
    row: usize,
    columns: &[usize],
    set: ValueSet,
    mu: &Rational,
    epsilon: &Rational,
) -> RowDeviation {
    let entries = m.row(row);
    let hits = columns.iter().filter(|&&c| set.contains(entries[c])).count();
    let subset = BigInt::from(columns.len());
    let total = BigInt::from(m.cols());
    let conditional = (Rational::new(BigInt::from(hits), subset.clone()) - mu).abs();
    let deviation = &conditional * Rational::new(subset, total);
    RowDeviation {
        row,
        hits,
        subset: columns.len(),
        within: conditional < *epsilon,
        deviation,
        conditional,
    }
}

/// Compares, row by row, the fraction of the columns in `A` that fall in
/// `B` with `ν(A)μ(B)`.
pub fn homogeneity_mc(
    m: &SampleMatrix,
    columns: &[usize],
    set: ValueSet,
    epsilon: &Rational,
) -> Result<HomogeneityTable> {
    check_columns(m, columns)?;
    let mu = m.space().measure(set)?;
    let rows: Vec<RowDeviation> = (0..m.rows())
        .map(|i| homogeneity_row(m, i, columns, set, &mu, epsilon))
        .collect();
    let within = rows.iter().filter(|r| r.within).count();
    Ok(HomogeneityTable { rows, within })
}
