use rayon::prelude::*;

use super::{pair_term, weight, weight_sum, DistanceEstimate, LevelTerm, Truncation, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::index::SegmentedIndex;
use crate::quantize::{floor_coord, rank_levels};
use crate::sample::Sample;

/// Smallest distance between a value of one sample and a different value of
/// the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinGap {
    Gap(f64),
    /// Every `x_i` equals every `y_j`.
    AllEqual,
}

fn sorted_distinct(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s.dedup();
    s
}

fn real_values<'a>(x: &'a Sample, what: &str) -> Result<&'a [f64]> {
    x.values().ok_or_else(|| {
        Error::AlphabetMismatch(format!("{what} needs real samples, got {}", x.alphabet()))
    })
}

/// `min |x_i - y_j|` over pairs with `x_i != y_j`.
pub fn min_gap(x: &Sample, y: &Sample) -> Result<MinGap> {
    let (a, b) = (real_values(x, "min_gap")?, real_values(y, "min_gap")?);
    let ys = sorted_distinct(b);
    let mut best = f64::INFINITY;
    for &v in &sorted_distinct(a) {
        let i = ys.partition_point(|&w| w < v);
        if i > 0 {
            best = best.min(v - ys[i - 1]);
        }
        let j = if ys.get(i) == Some(&v) { i + 1 } else { i };
        if let Some(&w) = ys.get(j) {
            best = best.min(w - v);
        }
    }
    Ok(if best.is_finite() { MinGap::Gap(best) } else { MinGap::AllEqual })
}

/// True when no level-`l` cell holds an `x` value and a different `y` value.
fn separated(x: &[f64], y: &[f64], l: u32) -> bool {
    let mut tagged: Vec<(f64, f64, bool)> = x
        .iter()
        .map(|&v| (floor_coord(v, l), v, false))
        .chain(y.iter().map(|&v| (floor_coord(v, l), v, true)))
        .collect();
    tagged.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    tagged.chunk_by(|p, q| p.0 == q.0).all(|cell| {
        let first = cell[0].1;
        cell.iter().all(|c| c.1 == first)
            || !(cell.iter().any(|c| c.2) && cell.iter().any(|c| !c.2))
    })
}

fn level_for_gap(s: f64) -> u32 {
    let mut l = 1;
    while l < MAX_LEVEL && (-(l as f64)).exp2() > s {
        l += 1;
    }
    l
}

/// The level `l*` from which every per-level term of `d̂(x, y)` is constant:
/// the smallest `l >= 1` with `2^-l <= min_gap(x, y)` (1 if all values are
/// equal), checked directly against the quantization.
pub fn separation_level(x: &[f64], y: &[f64]) -> u32 {
    let xs = sorted_distinct(x);
    let ys = sorted_distinct(y);
    let gap = min_gap(&Sample::Real(xs.clone()), &Sample::Real(ys.clone()));
    let mut l = match gap {
        Ok(MinGap::Gap(s)) => level_for_gap(s),
        _ => 1,
    };
    while l < MAX_LEVEL && !separated(&xs, &ys, l) {
        l += 1;
    }
    l
}

/// A level past which every split of `z` is separated: all distinct values
/// of `z` lie in distinct cells.
pub(crate) fn self_separation_level(z: &[f64]) -> u32 {
    let zs = sorted_distinct(z);
    let gap = zs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let mut l = if gap.is_finite() { level_for_gap(gap) } else { 1 };
    let distinct_cells = |l: u32| {
        zs.windows(2)
            .all(|w| floor_coord(w[0], l) != floor_coord(w[1], l))
    };
    while l < MAX_LEVEL && !distinct_cells(l) {
        l += 1;
    }
    l
}

/// Empirical distance between two real-valued samples.
///
/// With `Truncation::Cells` the double sum runs over `m <= m_max` and
/// `l <= l_max`; with `Truncation::ExactTail` over every `l`. Either way the
/// per-level terms are constant from the separation level on, so only levels
/// up to it are quantized and the last one carries the remaining weight.
pub fn dd_real(x: &Sample, y: &Sample, t: &Truncation) -> Result<DistanceEstimate> {
    let (a, b) = (real_values(x, "dd_real")?, real_values(y, "dd_real")?);
    t.check_for(true)?;
    let m_max = t.max_len();
    let cap = t.level_cap();
    let star = separation_level(a, b);
    let last = cap.map_or(star, |c| c.min(star));

    let rows: Vec<Vec<f64>> = (1..=last)
        .into_par_iter()
        .map(|l| {
            let (ranked, count) = rank_levels(&[a, b], l);
            let idx = SegmentedIndex::new(&[&ranked[0], &ranked[1]], count);
            (1..=m_max).map(|m| pair_term(&idx, m)).collect()
        })
        .collect();

    let mut per_level = Vec::with_capacity(m_max * last as usize);
    for m in 1..=m_max {
        for (i, row) in rows.iter().enumerate() {
            let l = i as u32 + 1;
            let wl = if l == last {
                weight_sum(l as u64, cap.map(u64::from))
            } else {
                weight(l as u64)
            };
            per_level.push(LevelTerm {
                m,
                l: Some(l),
                weight: weight(m as u64) * wl,
                term: row[m - 1],
            });
        }
    }
    Ok(DistanceEstimate::from_levels(*t, per_level))
}
