use super::{weight, DistanceEstimate, LevelTerm, Truncation};
use crate::error::{Error, Result};
use crate::index::SegmentedIndex;
use crate::sample::Sample;

/// `sum_B |nu(s0, B) - nu(s1, B)|` over the length-`k` words of the first two
/// segments of `idx`.
///
/// The sum is accumulated as the exact integer `sum_B |c0 n1 - c1 n0|` and
/// divided once, so it is symmetric in the two segments bit for bit.
pub(crate) fn pair_term(idx: &SegmentedIndex, k: usize) -> f64 {
    let (n0, n1) = (idx.windows(0, k), idx.windows(1, k));
    match (n0, n1) {
        (0, 0) => return 0.0,
        (0, _) | (_, 0) => return 1.0,
        _ => {}
    }
    let mut num: u128 = 0;
    idx.for_each_kgram(k, |_, c| {
        let a = c[0] as i128 * n1 as i128;
        let b = c[1] as i128 * n0 as i128;
        num += (a - b).unsigned_abs();
    });
    num as f64 / (n0 as f64 * n1 as f64)
}

/// Empirical distance between two discrete samples over the same alphabet.
///
/// Only words occurring in `x` or `y` are visited, so each level costs
/// `O(n)` after an `O(n log n)` suffix-array build.
pub fn dd_discrete(x: &Sample, y: &Sample, t: &Truncation) -> Result<DistanceEstimate> {
    let (a, b, size) = match (x, y) {
        (Sample::Discrete { size: s1, symbols: a }, Sample::Discrete { size: s2, symbols: b })
            if s1 == s2 =>
        {
            (a, b, *s1)
        }
        _ => {
            return Err(Error::AlphabetMismatch(format!(
                "dd_discrete needs two samples over one discrete alphabet, got {} and {}",
                x.alphabet(),
                y.alphabet()
            )))
        }
    };
    t.check_for(false)?;
    let idx = SegmentedIndex::new(&[a, b], size);
    let per_level = (1..=t.max_len())
        .map(|k| LevelTerm { m: k, l: None, weight: weight(k as u64), term: pair_term(&idx, k) })
        .collect();
    Ok(DistanceEstimate::from_levels(*t, per_level))
}
