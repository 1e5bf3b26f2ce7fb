use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{RectangleFamily, SampleMatrix};
use crate::algebra::{Rational, ValueSet};
use crate::error::{Error, Result};

/// The tolerance `b = (a − a²)/2` and the identity `a − 2b = a²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismIdentity {
    pub a: Rational,
    pub b: Rational,
    pub a_minus_2b: Rational,
    pub a_squared: Rational,
    pub holds: bool,
}

pub fn thmd_mechanism_check(a: &Rational) -> Result<MechanismIdentity> {
    if *a <= Rational::zero() || *a >= Rational::one() {
        return Err(Error::Domain(alloc::format!("a = {a} is not in (0, 1)")));
    }
    let a_squared = a * a;
    let b = (a - &a_squared) / Rational::from_integer(BigInt::from(2));
    let a_minus_2b = a - &b - &b;
    Ok(MechanismIdentity {
        holds: a_minus_2b == a_squared && b > Rational::zero(),
        a: a.clone(),
        b,
        a_minus_2b,
        a_squared,
    })
}

/// Two columns with the same rectangle-membership pattern whose sections
/// are both within `b` of the common row union `J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapWitness {
    pub eta: usize,
    pub theta: usize,
    /// `J = ⋃{B_i | η ∈ F_i}`.
    pub j_rows: Vec<usize>,
    /// Columns whose section error is below `b`.
    pub good_columns: usize,
    pub error_eta: Rational,
    pub error_theta: Rational,
    /// Empirical `π(φ_η⁻¹(A))`.
    pub freq_eta: Rational,
    /// `π(J ∩ φ_η⁻¹(A) ∩ φ_θ⁻¹(A))`.
    pub overlap: Rational,
    /// `π(φ_η⁻¹(A)) − err_η − err_θ`, a lower bound on `overlap`.
    pub lower_bound: Rational,
    /// `a − 2b`.
    pub threshold: Rational,
    /// `overlap > a − 2b`.
    pub realized: bool,
}

/// Looks for the two-column configuration used against joint
/// measurability: columns `η ≈ θ` (same membership in every `F_i`) whose
/// sections each differ from `J` on fewer than a fraction `b` of the rows.
/// Returns the first such pair in column order, or `None`.
pub fn overlap_check(
    m: &SampleMatrix,
    set: ValueSet,
    fam: &RectangleFamily,
    b: &Rational,
) -> Result<Option<OverlapWitness>> {
    let fam = RectangleFamily::new(fam.rects().to_vec())?;
    let a = m.space().measure(set)?;
    let rows = m.rows();
    if rows == 0 {
        return Ok(None);
    }
    let frac = |k: usize| Rational::new(BigInt::from(k), BigInt::from(rows));
    let union_rows = |pattern: &[bool]| -> Vec<bool> {
        let mut j = alloc::vec![false; rows];
        for (r, &inside) in fam.rects().iter().zip(pattern) {
            if inside {
                for &i in r.rows() {
                    if i < rows {
                        j[i] = true;
                    }
                }
            }
        }
        j
    };
    let mut classes: BTreeMap<Vec<bool>, Vec<(usize, Rational)>> = BTreeMap::new();
    let mut good = 0;
    for col in 0..m.cols() {
        let pattern = fam.column_pattern(col);
        let j = union_rows(&pattern);
        let err = (0..rows)
            .filter(|&i| set.contains(m.get(i, col)) != j[i])
            .count();
        let err = frac(err);
        if err < *b {
            good += 1;
            classes.entry(pattern).or_default().push((col, err));
        }
    }
    let pair = classes
        .iter()
        .filter(|(_, cols)| cols.len() >= 2)
        .map(|(p, cols)| (p, cols[0].clone(), cols[1].clone()))
        .min_by_key(|(_, x, y)| (x.0, y.0));
    let Some((pattern, (eta, error_eta), (theta, error_theta))) = pair else {
        return Ok(None);
    };
    let j = union_rows(pattern);
    let in_a = |i: usize, c: usize| set.contains(m.get(i, c));
    let overlap = frac((0..rows).filter(|&i| j[i] && in_a(i, eta) && in_a(i, theta)).count());
    let freq_eta = frac((0..rows).filter(|&i| in_a(i, eta)).count());
    let lower_bound = &freq_eta - &error_eta - &error_theta;
    let threshold = &a - b - b;
    Ok(Some(OverlapWitness {
        eta,
        theta,
        j_rows: (0..rows).filter(|&i| j[i]).collect(),
        good_columns: good,
        realized: overlap > threshold,
        error_eta,
        error_theta,
        freq_eta,
        overlap,
        lower_bound,
        threshold,
    }))
}
