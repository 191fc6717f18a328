//! Offline change-point estimation.
//!
//! A split `t` divides `z` into `z[..t]` and `z[t..]` (so `t` is the length of
//! the first part) and is reported as `theta = t / n`.

mod scan;

use serde::{Deserialize, Serialize};

use crate::cluster::cluster_offline;
use crate::distance::{distance, Truncation};
use crate::error::{Error, Result};
use crate::sample::Sample;

pub(crate) use scan::split_scores;

/// Windows shorter than this are refused by the multi-change-point searches.
pub const MIN_WINDOW: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangePointEstimate {
    /// Increasing, each `splits[i] / n`.
    pub thetas: Vec<f64>,
    pub splits: Vec<usize>,
    /// Score of each split: the scan maximum for a single change point, the
    /// local `Δ` otherwise.
    pub scores: Vec<f64>,
    pub n: usize,
    pub truncation: Truncation,
    /// Inclusive range of splits searched by a single-change-point scan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_range: Option<(usize, usize)>,
}

/// A ranked change-point candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub split: usize,
    pub theta: f64,
    pub score: f64,
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must lie in (0, 1), got {v}")))
    }
}

/// Splits searched for `(alpha, beta)`: `ceil(alpha n)..=floor(beta n)`
/// intersected with `1..=n-1`.
pub fn scan_range(n: usize, alpha: f64, beta: f64) -> Result<(usize, usize)> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    if alpha > beta {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} exceeds beta = {beta}")));
    }
    // absorb rounding in products such as 0.1 * 1000
    let lo = ((alpha * n as f64) - 1e-9).ceil().max(1.0) as usize;
    let hi = ((beta * n as f64) + 1e-9).floor().min(n as f64 - 1.0).max(0.0) as usize;
    if lo > hi {
        return Err(Error::InvalidArgument(format!(
            "no split of a length-{n} sample lies in [{alpha} n, {beta} n]"
        )));
    }
    Ok((lo, hi))
}

/// The split in `ceil(alpha n)..=floor(beta n)` maximizing
/// `d̂(z[..t], z[t..])`; ties go to the smallest `t`.
///
/// The estimator presumes that a change exists and always returns a split.
pub fn single_changepoint(z: &Sample, alpha: f64, beta: f64, t: &Truncation) -> Result<ChangePointEstimate> {
    let n = z.len();
    let (lo, hi) = scan_range(n, alpha, beta)?;
    let scores = split_scores(z, t, lo, hi)?;
    let (i, &best) = argmax(&scores);
    Ok(ChangePointEstimate {
        thetas: vec![(lo + i) as f64 / n as f64],
        splits: vec![lo + i],
        scores: vec![best],
        n,
        truncation: *t,
        scan_range: Some((lo, hi)),
    })
}

fn argmax(v: &[f64]) -> (usize, &f64) {
    v.iter()
        .enumerate()
        .fold((0, &v[0]), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// `Δ` on the 1-based window `a..=b`: the distance between
/// `z_a..z_floor((a+b)/2)` and `z_ceil((a+b)/2)..z_b`.
pub fn score_delta(z: &Sample, a: usize, b: usize, t: &Truncation) -> Result<f64> {
    if a < 1 || b > z.len() || b < a + 2 {
        return Err(Error::InvalidArgument(format!(
            "window {a}..={b} needs 1 <= a, b <= {} and b - a >= 2",
            z.len()
        )));
    }
    let left = z.slice(a - 1, (a + b) / 2)?;
    let right = z.slice((a + b).div_ceil(2) - 1, b)?;
    Ok(distance(&left, &right, t)?.value)
}

/// `Δ` of the split `c` over a radius-`r` neighbourhood: `z[c-r..c]` against
/// `z[c..c+r]`, clipped to the sample.
fn local_score(z: &Sample, c: usize, r: usize, t: &Truncation) -> Result<f64> {
    let left = z.slice(c.saturating_sub(r), c)?;
    let right = z.slice(c, (c + r).min(z.len()))?;
    Ok(distance(&left, &right, t)?.value)
}

struct Windows {
    /// `floor(n lambda / 3)`.
    len: usize,
    /// `floor(n lambda / 2)`.
    radius: usize,
}

fn windows(n: usize, lambda: f64) -> Result<Windows> {
    check_unit("lambda", lambda)?;
    let len = (n as f64 * lambda / 3.0).floor() as usize;
    if len < MIN_WINDOW {
        return Err(Error::InvalidArgument(format!(
            "window length floor(n lambda / 3) = {len} is below the minimum of {MIN_WINDOW}"
        )));
    }
    Ok(Windows { len, radius: (n as f64 * lambda / 2.0).floor() as usize })
}

/// Candidates from overlapping windows, scored and suppressed, best first.
///
/// Windows of length `2L` start every `L = floor(n lambda / 3)` symbols (the
/// last one runs to the end of `z`). Each contributes the best split of its
/// central half, scored by `Δ` over radius `L` around it. A candidate within
/// `floor(n lambda / 2)` of a better one is dropped; ties rank the earlier
/// split first.
fn ranked_candidates(z: &Sample, lambda: f64, t: &Truncation) -> Result<Vec<Candidate>> {
    let n = z.len();
    let w = windows(n, lambda)?;
    let l = w.len;
    let mut splits = Vec::new();
    let mut start = 0;
    loop {
        let last = start + 3 * l > n;
        let end = if last { n } else { start + 2 * l };
        let window = z.slice(start, end)?;
        let span = end - start;
        let (lo, hi) = (span.div_ceil(4).max(1), (3 * span / 4).min(span - 1));
        let scores = split_scores(&window, t, lo, hi)?;
        splits.push(start + lo + argmax(&scores).0);
        if last {
            break;
        }
        start += l;
    }
    splits.sort_unstable();
    splits.dedup();
    let mut cands = splits
        .iter()
        .map(|&c| {
            Ok(Candidate { split: c, theta: c as f64 / n as f64, score: local_score(z, c, l, t)? })
        })
        .collect::<Result<Vec<_>>>()?;
    cands.sort_by(|p, q| q.score.total_cmp(&p.score).then(p.split.cmp(&q.split)));
    let mut kept: Vec<Candidate> = Vec::new();
    for c in cands {
        if kept.iter().all(|k| k.split.abs_diff(c.split) > w.radius) {
            kept.push(c);
        }
    }
    Ok(kept)
}

fn estimate(mut picked: Vec<Candidate>, n: usize, t: &Truncation) -> ChangePointEstimate {
    picked.sort_by_key(|c| c.split);
    ChangePointEstimate {
        thetas: picked.iter().map(|c| c.theta).collect(),
        splits: picked.iter().map(|c| c.split).collect(),
        scores: picked.iter().map(|c| c.score).collect(),
        n,
        truncation: *t,
        scan_range: None,
    }
}

/// The `k` best-scoring change points, at least `floor(n lambda / 2) + 1`
/// apart, when at least `lambda n` separates consecutive true changes.
pub fn multi_changepoint_known_k(z: &Sample, k: usize, lambda: f64, t: &Truncation) -> Result<ChangePointEstimate> {
    if k == 0 {
        return Err(Error::InvalidArgument("the number of change points must be >= 1".into()));
    }
    let cands = ranked_candidates(z, lambda, t)?;
    if cands.len() < k {
        return Err(Error::Infeasible(format!(
            "{k} change points requested but only {} candidates survive suppression at lambda = {lambda}",
            cands.len()
        )));
    }
    Ok(estimate(cands[..k].to_vec(), z.len(), t))
}

/// All candidates, best first, at most `ceil(1 / lambda)` of them.
///
/// When the true changes are `lambda n` apart, the first `κ` entries estimate
/// them consistently for every `κ`.
pub fn list_changepoints(z: &Sample, lambda: f64, t: &Truncation) -> Result<Vec<Candidate>> {
    let mut cands = ranked_candidates(z, lambda, t)?;
    cands.truncate((1.0 / lambda).ceil() as usize);
    Ok(cands)
}

/// Change points when the segments come from `r` distinct distributions: the
/// sample is cut at every candidate, the pieces are clustered into `r`
/// groups, and neighbouring pieces of one group are merged. Returns the
/// number of remaining boundaries and their estimate.
pub fn multi_changepoint_known_r(
    z: &Sample,
    r: usize,
    lambda: f64,
    t: &Truncation,
) -> Result<(usize, ChangePointEstimate)> {
    if r == 0 {
        return Err(Error::InvalidArgument("the number of distributions must be >= 1".into()));
    }
    let n = z.len();
    let mut cands = ranked_candidates(z, lambda, t)?;
    cands.sort_by_key(|c| c.split);
    if r == 1 || cands.is_empty() {
        return Ok((0, estimate(Vec::new(), n, t)));
    }
    let mut cuts: Vec<usize> = vec![0];
    cuts.extend(cands.iter().map(|c| c.split));
    cuts.push(n);
    let pieces = cuts
        .windows(2)
        .map(|w| z.slice(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    let groups = cluster_offline(&pieces, r.min(pieces.len()), t)?;
    let kept: Vec<Candidate> = cands
        .iter()
        .enumerate()
        .filter(|(i, _)| groups.assignment[*i] != groups.assignment[i + 1])
        .map(|(_, c)| *c)
        .collect();
    Ok((kept.len(), estimate(kept, n, t)))
}
