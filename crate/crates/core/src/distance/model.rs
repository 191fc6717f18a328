use super::{weight, DistanceEstimate, LevelTerm, Truncation};
use crate::error::{Error, Result};
use crate::index::KGramIndex;
use crate::processes::forward::PrefixProbs;
use crate::processes::ProcessModel;
use crate::sample::Sample;

/// Words with more than this many prefixes are refused by [`dd_model_model`].
const MAX_ENUMERATED_WORDS: f64 = 1e8;

/// `sum_k w_k sum_B |nu(x, B) - rho(B)|` over all `B` in `A^k`, `k <= k_max`.
///
/// Words absent from `x` contribute `rho(B)` each; their total is one minus
/// the probability of the words that do occur, so only occurring words are
/// visited.
pub fn dd_sample_model(x: &Sample, rho: &ProcessModel, t: &Truncation) -> Result<DistanceEstimate> {
    let machine = rho.forward_machine()?;
    let (size, symbols) = match x {
        Sample::Discrete { size, symbols } if *size == rho.alphabet_size() => (*size, symbols),
        _ => {
            return Err(Error::AlphabetMismatch(format!(
                "sample over {} against a model over discrete({})",
                x.alphabet(),
                rho.alphabet_size()
            )))
        }
    };
    t.check_for(false)?;
    let idx = KGramIndex::from_symbols(symbols, size);
    let n = symbols.len();
    let per_level = (1..=t.max_len())
        .map(|k| {
            let term = if k > n {
                1.0
            } else {
                let windows = (n - k + 1) as f64;
                let mut probs = PrefixProbs::new(&machine);
                let (mut diff, mut seen) = (0.0, 0.0);
                idx.for_each_kgram(k, |w, c| {
                    let p = probs.prob(w);
                    diff += (c as f64 / windows - p).abs();
                    seen += p;
                });
                diff + (1.0 - seen).max(0.0)
            };
            LevelTerm { m: k, l: None, weight: weight(k as u64), term }
        })
        .collect();
    Ok(DistanceEstimate::from_levels(*t, per_level))
}

/// The truncated distance `sum_k w_k sum_B |rho1(B) - rho2(B)|` between two
/// models, by depth-first enumeration of `A^k` that skips words impossible
/// under both.
pub fn dd_model_model(
    rho1: &ProcessModel,
    rho2: &ProcessModel,
    t: &Truncation,
) -> Result<DistanceEstimate> {
    let (m1, m2) = (rho1.forward_machine()?, rho2.forward_machine()?);
    let a = rho1.alphabet_size();
    if a != rho2.alphabet_size() {
        return Err(Error::AlphabetMismatch(format!(
            "models over discrete({a}) and discrete({})",
            rho2.alphabet_size()
        )));
    }
    t.check_for(false)?;
    let k_max = t.max_len();
    if (a as f64).powi(k_max as i32) > MAX_ENUMERATED_WORDS {
        return Err(Error::InvalidTruncation(format!(
            "k_max = {k_max} over {a} symbols needs more than {MAX_ENUMERATED_WORDS:e} words"
        )));
    }
    let mut terms = vec![0.0; k_max];
    // (word length, forward vectors under both models)
    let mut stack: Vec<(usize, Vec<f64>, Vec<f64>)> =
        (0..a).rev().map(|s| (1, m1.start(s), m2.start(s))).collect();
    while let Some((depth, f1, f2)) = stack.pop() {
        let (p1, p2): (f64, f64) = (f1.iter().sum(), f2.iter().sum());
        if p1 == 0.0 && p2 == 0.0 {
            continue;
        }
        terms[depth - 1] += (p1 - p2).abs();
        if depth < k_max {
            for s in (0..a).rev() {
                stack.push((depth + 1, m1.step(&f1, s), m2.step(&f2, s)));
            }
        }
    }
    let per_level = terms
        .into_iter()
        .enumerate()
        .map(|(i, term)| LevelTerm { m: i + 1, l: None, weight: weight(i as u64 + 1), term })
        .collect();
    Ok(DistanceEstimate::from_levels(*t, per_level))
}
