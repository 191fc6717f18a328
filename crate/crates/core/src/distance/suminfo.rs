use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{self_separation_level, weight, Truncation};
use crate::error::{Error, Result};
use crate::index::SegmentedIndex;
use crate::quantize::rank_levels;
use crate::sample::Sample;

/// `sum_l w_l / l` over all `l >= 1`.
pub(crate) fn level_weight_total() -> f64 {
    PI * PI / 6.0 - 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformationTerm {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    pub weight: f64,
    /// `sum_i h(X^i) - h(X^1, ..., X^N)` over `m`-tuples, in bits.
    pub bracket: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumInformation {
    pub value: f64,
    pub truncation: Truncation,
    pub terms: Vec<InformationTerm>,
}

/// Plug-in entropy, in bits, of the length-`m` words of `seq`.
fn word_entropy(idx: &SegmentedIndex, m: usize) -> f64 {
    let windows = idx.windows(0, m);
    if windows == 0 {
        return 0.0;
    }
    let w = windows as f64;
    let mut h = 0.0;
    idx.for_each_kgram(m, |_, c| {
        let p = c[0] as f64 / w;
        h -= p * p.log2();
    });
    h
}

/// Relabels the tuples `(s_1[t], ..., s_N[t])` with dense ids.
fn joint_ids(seqs: &[Vec<u32>]) -> (Vec<u32>, u32) {
    let n = seqs[0].len();
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let joint = (0..n)
        .map(|t| {
            let key: Vec<u32> = seqs.iter().map(|s| s[t]).collect();
            let next = ids.len() as u32;
            *ids.entry(key).or_insert(next)
        })
        .collect();
    (joint, ids.len() as u32)
}

/// `[sum_i h(X^i) - h(joint)]` for `m = 1..=m_max` on already-discrete data.
fn brackets(seqs: &[Vec<u32>], sizes: &[u32], m_max: usize) -> Vec<f64> {
    let marginals: Vec<SegmentedIndex> = seqs
        .iter()
        .zip(sizes)
        .map(|(s, &a)| SegmentedIndex::new(&[s], a))
        .collect();
    let (joint, count) = joint_ids(seqs);
    let joint = SegmentedIndex::new(&[&joint], count);
    (1..=m_max)
        .map(|m| {
            marginals.iter().map(|i| word_entropy(i, m)).sum::<f64>() - word_entropy(&joint, m)
        })
        .collect()
}

/// Plug-in estimate of the sum-information of aligned samples,
/// `sum_m (w_m/m) sum_l (w_l/l) [sum_i h(X^i) - h(X^1..X^N)]` over `m`-tuples
/// quantized at level `l`.
///
/// Discrete samples are not quantized, so the level sum collapses to its
/// total weight `pi^2/6 - 1`. For real samples the bracket is constant once
/// every sample's distinct values occupy distinct cells; with an exact tail
/// the remaining level weight is added to that level.
pub fn sum_information(samples: &[Sample], t: &Truncation) -> Result<SumInformation> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("sum-information needs >= 2 samples".into()));
    }
    let n = samples[0].len();
    if let Some(s) = samples.iter().find(|s| s.len() != n) {
        return Err(Error::LengthMismatch(format!(
            "samples of lengths {n} and {} are not aligned",
            s.len()
        )));
    }
    let real = samples[0].values().is_some();
    if samples.iter().any(|s| s.values().is_some() != real) {
        return Err(Error::AlphabetMismatch("cannot mix discrete and real samples".into()));
    }
    t.check_for(real)?;
    let m_max = t.max_len();
    let mut terms = Vec::new();
    if !real {
        let seqs: Vec<Vec<u32>> = samples.iter().map(|s| s.symbols().unwrap().to_vec()).collect();
        let sizes: Vec<u32> = samples.iter().map(|s| s.alphabet_size().unwrap()).collect();
        for (i, b) in brackets(&seqs, &sizes, m_max).into_iter().enumerate() {
            let m = i + 1;
            terms.push(InformationTerm {
                m,
                l: None,
                weight: weight(m as u64) / m as f64 * level_weight_total(),
                bracket: b,
            });
        }
    } else {
        let values: Vec<&[f64]> = samples.iter().map(|s| s.values().unwrap()).collect();
        let star = values.iter().map(|v| self_separation_level(v)).max().unwrap_or(1);
        let cap = t.level_cap();
        let last = cap.map_or(star, |c| c.min(star));
        let lw = |l: u32| weight(l as u64) / l as f64;
        let mut rows = Vec::new();
        for l in 1..=last {
            let (seqs, sizes): (Vec<Vec<u32>>, Vec<u32>) = values
                .iter()
                .map(|v| {
                    let (mut r, c) = rank_levels(&[v], l);
                    (r.pop().unwrap(), c)
                })
                .unzip();
            let w = if l < last {
                lw(l)
            } else {
                match cap {
                    Some(c) => (l..=c).map(lw).sum(),
                    None => level_weight_total() - (1..l).map(lw).sum::<f64>(),
                }
            };
            rows.push((l, w, brackets(&seqs, &sizes, m_max)));
        }
        for m in 1..=m_max {
            for (l, w, b) in &rows {
                terms.push(InformationTerm {
                    m,
                    l: Some(*l),
                    weight: weight(m as u64) / m as f64 * w,
                    bracket: b[m - 1],
                });
            }
        }
    }
    let value = terms.iter().map(|t| t.weight * t.bracket).sum();
    Ok(SumInformation { value, truncation: *t, terms })
}
