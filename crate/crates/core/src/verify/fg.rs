use num_bigint::BigInt;
use crate::algebra::Rational;
use crate::error::{Error, Result};

pub const FG_MAX_N: usize = 30;

/// Result of searching `{0,1}^n` for vectors whose every prefix has mean
/// exactly `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgReport {
    pub n: usize,
    pub target: Rational,
    /// `2^n`.
    pub total: u64,
    pub satisfying: u64,
    /// Smallest prefix length `k` that no vector satisfies, if any.
    pub obstruction: Option<usize>,
    /// Prefixes visited by the pruned search.
    pub visited: u64,
}

/// Exhaustive search with pruning: a prefix of length `k` survives iff its
/// sum equals `k · target`; extensions of dead prefixes are never visited.
pub fn fg_search(n: usize, target: &Rational) -> Result<FgReport> {
    if n == 0 || n > FG_MAX_N {
        return Err(Error::Domain(alloc::format!(
            "population size {n} outside 1..={FG_MAX_N}"
        )));
    }
    let mut surviving = [0u64; FG_MAX_N + 1];
    let mut visited = 0u64;
    // (length, sum) of live prefixes; the empty prefix is always live
    let mut stack: alloc::vec::Vec<(usize, u64)> = alloc::vec![(0, 0)];
    surviving[0] = 1;
    while let Some((len, sum)) = stack.pop() {
        if len == n {
            continue;
        }
        for bit in [0u64, 1] {
            visited += 1;
            let (k, s) = (len + 1, sum + bit);
            let want = target * Rational::from_integer(BigInt::from(k));
            if Rational::from_integer(BigInt::from(s)) == want {
                surviving[k] += 1;
                stack.push((k, s));
            }
        }
    }
    let obstruction = (1..=n).find(|&k| surviving[k] == 0);
    Ok(FgReport {
        n,
        target: target.clone(),
        total: 1u64 << n,
        satisfying: surviving[n],
        obstruction,
        visited,
    })
}

/// The homogeneity demand `∫_0^θ φ_t dt = θ/2` for a `{0,1}` process on a
/// population of `n` equal-weight traders: every prefix mean must be `1/2`.
pub fn fg_impossibility(n: usize) -> Result<FgReport> {
    let report = fg_search(n, &crate::algebra::rational(1, 2))?;
    debug_assert!(report.satisfying == 0 && report.obstruction == Some(1));
    Ok(report)
}
