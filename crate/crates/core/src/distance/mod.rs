//! Empirical and model-level distributional distance.
//!
//! Word lengths and quantization levels are weighted by `w_k = 1/(k(k+1))`.
//! Every estimate records the truncation that produced it.

mod discrete;
mod model;
mod real;
mod suminfo;

use serde::{Deserialize, Serialize};

pub use discrete::dd_discrete;
pub use model::{dd_model_model, dd_sample_model};
pub use real::{dd_real, min_gap, separation_level, MinGap};
pub use suminfo::{sum_information, SumInformation};

pub(crate) use discrete::pair_term;
pub(crate) use real::self_separation_level;

use crate::error::{Error, Result};
use crate::sample::Sample;

/// Largest quantization level accepted in a truncation.
pub const MAX_LEVEL: u32 = 1000;

/// Default cap on the quantization level of real-valued truncations.
pub const DEFAULT_LEVEL_CAP: u32 = 52;

/// `w_k = 1/(k(k+1))`.
pub fn weight(k: u64) -> f64 {
    let k = k as f64;
    1.0 / (k * (k + 1.0))
}

/// `sum_{k=a..=b} w_k = 1/a - 1/(b+1)`; `b = None` sums to infinity.
pub fn weight_sum(a: u64, b: Option<u64>) -> f64 {
    match b {
        Some(b) if b < a => 0.0,
        Some(b) => 1.0 / a as f64 - 1.0 / (b as f64 + 1.0),
        None => 1.0 / a as f64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    #[default]
    Truncated,
    ExactTail,
}

/// Which terms of the infinite weighted sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TruncationRepr", into = "TruncationRepr")]
pub enum Truncation {
    /// Discrete samples: word lengths `1..=k_max`.
    Words { k_max: usize },
    /// Real samples: window lengths `1..=m_max`, levels `1..=l_max`.
    Cells { m_max: usize, l_max: u32 },
    /// Real samples: window lengths `1..=m_max` and every level, the levels
    /// past the separation level being summed in closed form. An optional
    /// `l_max` caps the levels as in [`Truncation::Cells`].
    ExactTail { m_max: usize, l_max: Option<u32> },
}

impl Truncation {
    pub fn words(k_max: usize) -> Self {
        Truncation::Words { k_max }
    }

    pub fn cells(m_max: usize, l_max: u32) -> Self {
        Truncation::Cells { m_max, l_max }
    }

    pub fn exact_tail(m_max: usize) -> Self {
        Truncation::ExactTail { m_max, l_max: None }
    }

    pub fn mode(&self) -> TailMode {
        match self {
            Truncation::ExactTail { .. } => TailMode::ExactTail,
            _ => TailMode::Truncated,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Truncation::Words { .. })
    }

    /// Longest word or window length.
    pub fn max_len(&self) -> usize {
        match *self {
            Truncation::Words { k_max } => k_max,
            Truncation::Cells { m_max, .. } | Truncation::ExactTail { m_max, .. } => m_max,
        }
    }

    /// Level cap, `None` for an uncapped exact tail and for discrete data.
    pub fn level_cap(&self) -> Option<u32> {
        match *self {
            Truncation::Words { .. } => None,
            Truncation::Cells { l_max, .. } => Some(l_max),
            Truncation::ExactTail { l_max, .. } => l_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_len() == 0 {
            return Err(Error::InvalidTruncation("k_max and m_max must be >= 1".into()));
        }
        if let Some(l) = self.level_cap() {
            if l == 0 || l > MAX_LEVEL {
                return Err(Error::InvalidTruncation(format!(
                    "l_max must lie in 1..={MAX_LEVEL}, got {l}"
                )));
            }
        }
        Ok(())
    }

    /// Checks that the truncation fits samples over `alphabet`.
    pub(crate) fn check_for(&self, real: bool) -> Result<()> {
        self.validate()?;
        match (self.is_discrete(), real) {
            (true, true) => Err(Error::InvalidTruncation(
                "real samples need an (m_max, l_max) or exact-tail truncation".into(),
            )),
            (false, false) => Err(Error::InvalidTruncation(
                "discrete samples need a k_max truncation".into(),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TruncationRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l_max: Option<u32>,
    #[serde(default)]
    mode: TailMode,
}

impl From<Truncation> for TruncationRepr {
    fn from(t: Truncation) -> Self {
        let mode = t.mode();
        match t {
            Truncation::Words { k_max } => {
                TruncationRepr { k_max: Some(k_max), m_max: None, l_max: None, mode }
            }
            Truncation::Cells { m_max, l_max } => {
                TruncationRepr { k_max: None, m_max: Some(m_max), l_max: Some(l_max), mode }
            }
            Truncation::ExactTail { m_max, l_max } => {
                TruncationRepr { k_max: None, m_max: Some(m_max), l_max, mode }
            }
        }
    }
}

impl TryFrom<TruncationRepr> for Truncation {
    type Error = String;

    fn try_from(r: TruncationRepr) -> std::result::Result<Self, String> {
        let t = match (r.k_max, r.m_max, r.l_max, r.mode) {
            (Some(k_max), None, None, TailMode::Truncated) => Truncation::Words { k_max },
            (None, Some(m_max), Some(l_max), TailMode::Truncated) => {
                Truncation::Cells { m_max, l_max }
            }
            (None, Some(m_max), l_max, TailMode::ExactTail) => {
                Truncation::ExactTail { m_max, l_max }
            }
            _ => {
                return Err("truncation needs k_max, or m_max with l_max, or m_max with \
                            mode \"exact_tail\""
                    .into())
            }
        };
        t.validate().map_err(|e| e.to_string())?;
        Ok(t)
    }
}

/// The contribution of one `(m, l)` (real) or `k` (discrete) level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelTerm {
    /// Word or window length.
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    /// Total weight carried by this term.
    pub weight: f64,
    /// `sum_B |nu(x,B) - nu(y,B)|` at this level, in `[0, 2]`.
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub value: f64,
    pub truncation: Truncation,
    pub per_level: Vec<LevelTerm>,
}

impl DistanceEstimate {
    pub(crate) fn from_levels(truncation: Truncation, per_level: Vec<LevelTerm>) -> Self {
        let value = per_level.iter().map(|t| t.weight * t.term).sum();
        DistanceEstimate { value, truncation, per_level }
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `k_max = max(1, ceil(log2 n))`.
pub fn default_words(n: usize) -> Truncation {
    Truncation::Words { k_max: ceil_log2(n).max(1) }
}

/// The default truncation for comparing `x` with `y`.
///
/// Discrete: `k_max = max(1, ceil(log2 n))` with `n` the longer length. Real:
/// `m_max` likewise, and `l_max` the smallest level at which no occupied
/// one-dimensional cell of either sample holds more than `ceil(log2 n)`
/// points, capped at 52.
pub fn default_truncation(x: &Sample, y: &Sample) -> Result<Truncation> {
    let n = x.len().max(y.len());
    match (x.values(), y.values()) {
        (None, None) => Ok(default_words(n)),
        (Some(a), Some(b)) => {
            let m_max = ceil_log2(n).max(1);
            Ok(Truncation::Cells { m_max, l_max: default_level(&[a, b], m_max) })
        }
        _ => Err(Error::AlphabetMismatch(format!(
            "cannot compare {} with {}",
            x.alphabet(),
            y.alphabet()
        ))),
    }
}

/// Smallest `l` with every occupied level-`l` cell of each sequence holding at
/// most `limit` values, capped at [`DEFAULT_LEVEL_CAP`].
pub(crate) fn default_level(seqs: &[&[f64]], limit: usize) -> u32 {
    let sorted: Vec<Vec<f64>> = seqs
        .iter()
        .map(|s| {
            let mut v = s.to_vec();
            v.sort_by(f64::total_cmp);
            v
        })
        .collect();
    (1..DEFAULT_LEVEL_CAP)
        .find(|&l| sorted.iter().all(|v| max_occupancy(v, l) <= limit))
        .unwrap_or(DEFAULT_LEVEL_CAP)
}

/// Largest number of sorted values sharing one level-`l` cell.
pub(crate) fn max_occupancy(sorted: &[f64], l: u32) -> usize {
    let mut best = 0;
    let mut run = 0;
    let mut prev = None;
    for &x in sorted {
        let c = crate::quantize::floor_coord(x, l);
        if prev == Some(c) {
            run += 1;
        } else {
            run = 1;
            prev = Some(c);
        }
        best = best.max(run);
    }
    best
}

/// `d̂(x, y)` for two samples of the same kind.
pub fn distance(x: &Sample, y: &Sample, t: &Truncation) -> Result<DistanceEstimate> {
    match x {
        Sample::Discrete { .. } => dd_discrete(x, y, t),
        Sample::Real(_) => dd_real(x, y, t),
    }
}
