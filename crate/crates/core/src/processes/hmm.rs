use serde::{Deserialize, Serialize};

use super::check_distribution;
use super::forward::ForwardMachine;
use super::markov::{stationary_distribution, Init};
use super::rng::{cumulative, draw, rng_from_seed};
use crate::error::{Error, Result};

/// A function of a Markov chain: hidden states `0..S` follow `transitions`,
/// and state `s` emits symbol `a` with probability `emissions[s][a]`.
///
/// A deterministic emission function is the special case of one-hot rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hmm {
    pub transitions: Vec<Vec<f64>>,
    pub emissions: Vec<Vec<f64>>,
    #[serde(default)]
    pub init: Init,
}

impl Hmm {
    pub fn new(transitions: Vec<Vec<f64>>, emissions: Vec<Vec<f64>>, init: Init) -> Result<Self> {
        let h = Hmm { transitions, emissions, init };
        h.validate()?;
        Ok(h)
    }

    /// Hidden chain with a deterministic emission `f(state)`.
    pub fn function_of_chain(transitions: Vec<Vec<f64>>, f: &[u32], alphabet: u32) -> Result<Self> {
        let emissions = f
            .iter()
            .map(|&a| (0..alphabet).map(|b| if a == b { 1.0 } else { 0.0 }).collect())
            .collect();
        Hmm::new(transitions, emissions, Init::Stationary)
    }

    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn alphabet(&self) -> u32 {
        self.emissions.first().map_or(0, |r| r.len() as u32)
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.states();
        if s == 0 {
            return Err(Error::InvalidModel("hmm.transitions must not be empty".into()));
        }
        if self.emissions.len() != s {
            return Err(Error::InvalidModel(format!(
                "hmm.emissions needs one row per hidden state ({s}), got {}",
                self.emissions.len()
            )));
        }
        if self.alphabet() < 2 {
            return Err(Error::InvalidModel("hmm.emissions rows need >= 2 symbols".into()));
        }
        for (i, row) in self.transitions.iter().enumerate() {
            if row.len() != s {
                return Err(Error::InvalidModel(format!(
                    "hmm.transitions[{i}] has {} entries, expected {s}",
                    row.len()
                )));
            }
            check_distribution(row, &format!("hmm.transitions[{i}]"))?;
        }
        for (i, row) in self.emissions.iter().enumerate() {
            if row.len() != self.alphabet() as usize {
                return Err(Error::InvalidModel(format!(
                    "hmm.emissions[{i}] has {} entries, expected {}",
                    row.len(),
                    self.alphabet()
                )));
            }
            check_distribution(row, &format!("hmm.emissions[{i}]"))?;
        }
        if let Init::Explicit(v) = &self.init {
            if v.len() != s {
                return Err(Error::InvalidModel(format!(
                    "hmm.init needs {s} entries, got {}",
                    v.len()
                )));
            }
            check_distribution(v, "hmm.init")?;
        }
        Ok(())
    }

    fn hidden_law(&self) -> Result<Vec<f64>> {
        match &self.init {
            Init::Stationary => stationary_distribution(&self.transitions),
            Init::Explicit(v) => Ok(v.clone()),
        }
    }

    pub(crate) fn forward_machine(&self) -> Result<ForwardMachine> {
        if !matches!(self.init, Init::Stationary) {
            return Err(Error::UnsupportedModel(
                "marginal probabilities need a stationary hidden initial law".into(),
            ));
        }
        let init = stationary_distribution(&self.transitions)?;
        let trans = self
            .transitions
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &q)| q > 0.0)
                    .map(|(j, &q)| (j as u32, q))
                    .collect()
            })
            .collect();
        let emit = (0..self.alphabet() as usize)
            .map(|a| self.emissions.iter().map(|row| row[a]).collect())
            .collect();
        Ok(ForwardMachine { init, trans, emit })
    }

    pub(crate) fn sample(&self, n: usize, seed: u64) -> Result<Vec<u32>> {
        let mut rng = rng_from_seed(seed);
        let init = cumulative(&self.hidden_law()?);
        let trans: Vec<Vec<f64>> = self.transitions.iter().map(|r| cumulative(r)).collect();
        let emit: Vec<Vec<f64>> = self.emissions.iter().map(|r| cumulative(r)).collect();
        let mut h = draw(&mut rng, &init);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(draw(&mut rng, &emit[h]) as u32);
            if i + 1 < n {
                h = draw(&mut rng, &trans[h]);
            }
        }
        Ok(out)
    }
}
