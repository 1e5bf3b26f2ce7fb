use alloc::vec::Vec;

use num_bigint::BigInt;

use super::SampleMatrix;
use crate::algebra::{Rational, ValueSet};
use crate::error::{Error, Result};

/// Exhaustive search is guarded to grids of at most this many rows and
/// columns ...
pub const EXHAUSTIVE_MAX_SIDE: usize = 4;
/// ... and families of at most this many rectangles.
pub const EXHAUSTIVE_MAX_RECTS: usize = 2;

/// A product `B × F` of a row set and a column set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rectangle {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Rectangle {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        Rectangle { rows, cols }
    }

    fn from_masks(rows: u64, cols: u64) -> Self {
        let bits = |m: u64| (0..64).filter(move |i| m >> i & 1 == 1).collect();
        Rectangle {
            rows: bits(rows),
            cols: bits(cols),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.rows.binary_search(&row).is_ok() && self.cols.binary_search(&col).is_ok()
    }

    fn disjoint_sorted(a: &[usize], b: &[usize]) -> bool {
        !a.iter().any(|x| b.binary_search(x).is_ok())
    }

    pub fn is_disjoint(&self, other: &Rectangle) -> bool {
        Self::disjoint_sorted(&self.rows, &other.rows) || Self::disjoint_sorted(&self.cols, &other.cols)
    }
}

/// Rectangles whose products are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RectangleFamily {
    rects: Vec<Rectangle>,
}

impl RectangleFamily {
    pub fn new(rects: Vec<Rectangle>) -> Result<Self> {
        for (i, a) in rects.iter().enumerate() {
            for (j, b) in rects.iter().enumerate().skip(i + 1) {
                if !a.is_disjoint(b) {
                    return Err(Error::OverlappingRectangles { first: i, second: j });
                }
            }
        }
        Ok(RectangleFamily { rects })
    }

    pub fn empty() -> Self {
        RectangleFamily::default()
    }

    pub fn rects(&self) -> &[Rectangle] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn covers(&self, row: usize, col: usize) -> bool {
        self.rects.iter().any(|r| r.contains(row, col))
    }

    /// Indices of the rectangles whose column set contains `col`.
    pub fn column_pattern(&self, col: usize) -> Vec<bool> {
        self.rects
            .iter()
            .map(|r| r.cols.binary_search(&col).is_ok())
            .collect()
    }
}

fn count_mismatches(m: &SampleMatrix, set: ValueSet, fam: &RectangleFamily) -> usize {
    let mut n = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if set.contains(m.get(i, j)) != fam.covers(i, j) {
                n += 1;
            }
        }
    }
    n
}

fn density(mismatches: usize, m: &SampleMatrix) -> Rational {
    Rational::new(
        BigInt::from(mismatches),
        BigInt::from((m.rows() * m.cols()).max(1)),
    )
}

/// Density of `φ⁻¹(A) △ ⋃ B_i × F_i` over the grid.
pub fn rectangle_error(m: &SampleMatrix, set: ValueSet, fam: &RectangleFamily) -> Result<Rational> {
    let fam = RectangleFamily::new(fam.rects.clone())?;
    for r in &fam.rects {
        if r.rows.last().is_some_and(|&i| i >= m.rows()) || r.cols.last().is_some_and(|&j| j >= m.cols()) {
            return Err(Error::Domain("rectangle exceeds the grid".into()));
        }
    }
    Ok(density(count_mismatches(m, set, &fam), m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleOptimum {
    pub error: Rational,
    pub mismatches: usize,
    pub family: RectangleFamily,
    /// False when the heuristic search produced the family.
    pub exhaustive: bool,
}

// +1 for a cell in φ⁻¹(A), −1 otherwise: covering a rectangle changes the
// mismatch count by minus its score.
fn scores(m: &SampleMatrix, set: ValueSet) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|&l| if set.contains(l) { 1 } else { -1 })
                .collect()
        })
        .collect()
}

/// Least rectangle error over families of at most `max_rects` pairwise
/// disjoint rectangles. Exhaustive on grids within the size guard; larger
/// instances need `allow_heuristic`, which runs a greedy alternating search
/// and flags the result as non-exhaustive.
pub fn min_rectangle_error(
    m: &SampleMatrix,
    set: ValueSet,
    max_rects: usize,
    allow_heuristic: bool,
) -> Result<RectangleOptimum> {
    let small = m.rows() <= EXHAUSTIVE_MAX_SIDE
        && m.cols() <= EXHAUSTIVE_MAX_SIDE
        && max_rects <= EXHAUSTIVE_MAX_RECTS;
    let (family, exhaustive) = if small {
        (exhaustive_family(m, set, max_rects), true)
    } else if allow_heuristic {
        (heuristic_family(m, set, max_rects), false)
    } else {
        return Err(Error::SizeLimit(alloc::format!(
            "{}×{} grid with up to {max_rects} rectangles (exhaustive limit {EXHAUSTIVE_MAX_SIDE}×{EXHAUSTIVE_MAX_SIDE}, {EXHAUSTIVE_MAX_RECTS} rectangles)",
            m.rows(),
            m.cols()
        )));
    };
    let mismatches = count_mismatches(m, set, &family);
    Ok(RectangleOptimum {
        error: density(mismatches, m),
        mismatches,
        family,
        exhaustive,
    })
}

fn exhaustive_family(m: &SampleMatrix, set: ValueSet, max_rects: usize) -> RectangleFamily {
    let s = scores(m, set);
    let mut rects: Vec<(u64, u64, i64)> = Vec::new();
    for rm in 1u64..1 << m.rows() {
        for cm in 1u64..1 << m.cols() {
            let mut g = 0;
            for (i, row) in s.iter().enumerate() {
                if rm >> i & 1 == 1 {
                    for (j, v) in row.iter().enumerate() {
                        if cm >> j & 1 == 1 {
                            g += v;
                        }
                    }
                }
            }
            rects.push((rm, cm, g));
        }
    }
    let mut best: (i64, Vec<usize>) = (0, Vec::new());
    let mut chosen = Vec::new();
    search(&rects, max_rects, 0, 0, &mut chosen, &mut best);
    RectangleFamily {
        rects: best
            .1
            .iter()
            .map(|&k| Rectangle::from_masks(rects[k].0, rects[k].1))
            .collect(),
    }
}

fn search(
    rects: &[(u64, u64, i64)],
    left: usize,
    from: usize,
    gain: i64,
    chosen: &mut Vec<usize>,
    best: &mut (i64, Vec<usize>),
) {
    if gain > best.0 {
        *best = (gain, chosen.clone());
    }
    if left == 0 {
        return;
    }
    for k in from..rects.len() {
        let (rm, cm, g) = rects[k];
        let disjoint = chosen
            .iter()
            .all(|&c| rects[c].0 & rm == 0 || rects[c].1 & cm == 0);
        if disjoint {
            chosen.push(k);
            search(rects, left - 1, k + 1, gain + g, chosen, best);
            chosen.pop();
        }
    }
}

fn heuristic_family(m: &SampleMatrix, set: ValueSet, max_rects: usize) -> RectangleFamily {
    let s = scores(m, set);
    let mut used = alloc::vec![false; m.rows()];
    let mut rects = Vec::new();
    for _ in 0..max_rects {
        let mut best: Option<(i64, Vec<usize>, Vec<usize>)> = None;
        let seeds = (0..m.cols()).map(|c| (None, Some(c))).chain(
            (0..m.rows())
                .filter(|&r| !used[r])
                .map(|r| (Some(r), None)),
        );
        for (row_seed, col_seed) in seeds {
            let (mut rows, mut cols) = match (row_seed, col_seed) {
                (Some(r), _) => (alloc::vec![r], best_cols(&s, &[r], m.cols())),
                (_, Some(c)) => (best_rows(&s, &[c], &used), alloc::vec![c]),
                _ => unreachable!(),
            };
            for _ in 0..32 {
                let next_rows = best_rows(&s, &cols, &used);
                let next_cols = best_cols(&s, &next_rows, m.cols());
                if next_rows == rows && next_cols == cols {
                    break;
                }
                rows = next_rows;
                cols = next_cols;
            }
            let g: i64 = rows.iter().map(|&i| cols.iter().map(|&j| s[i][j]).sum::<i64>()).sum();
            if g > 0 && best.as_ref().is_none_or(|b| g > b.0) {
                best = Some((g, rows, cols));
            }
        }
        let Some((_, rows, cols)) = best else { break };
        for &r in &rows {
            used[r] = true;
        }
        rects.push(Rectangle::new(rows, cols));
    }
    // rectangles use disjoint row sets
    RectangleFamily { rects }
}

fn best_rows(s: &[Vec<i64>], cols: &[usize], used: &[bool]) -> Vec<usize> {
    (0..s.len())
        .filter(|&i| !used[i] && cols.iter().map(|&j| s[i][j]).sum::<i64>() > 0)
        .collect()
}

fn best_cols(s: &[Vec<i64>], rows: &[usize], ncols: usize) -> Vec<usize> {
    (0..ncols)
        .filter(|&j| rows.iter().map(|&i| s[i][j]).sum::<i64>() > 0)
        .collect()
}
