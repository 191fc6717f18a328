//! Samplable process models.
//!
//! i.i.d., finite-order Markov and hidden-Markov models also expose exact
//! stationary word probabilities; the translation process and the diagonal
//! adversary are simulation-only.

mod diagonal;
pub(crate) mod forward;
mod hmm;
mod markov;
pub mod rng;
mod translation;

use serde::{Deserialize, Serialize};

pub use diagonal::{
    AdversaryStart, AdversaryState, AdversaryTrajectory, DiagonalAdversary, SwitchPassage,
};
pub(crate) use forward::ForwardMachine;
pub use hmm::Hmm;
pub use markov::{residual, stationary_distribution, stationary_init, Init, Markov};
pub use translation::Translation;

use crate::error::{Error, Result};
use crate::sample::Sample;
use rng::{cumulative, draw, rng_from_seed};

/// Probability rows must sum to 1 within this tolerance.
pub const ROW_TOLERANCE: f64 = 1e-12;

pub(crate) fn check_distribution(row: &[f64], field: &str) -> Result<()> {
    if let Some((i, p)) = row.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidModel(format!(
            "{field}[{i}] = {p} is not a probability"
        )));
    }
    let s: f64 = row.iter().sum();
    if (s - 1.0).abs() > ROW_TOLERANCE {
        return Err(Error::InvalidModel(format!("{field} sums to {s}, not 1")));
    }
    Ok(())
}

/// i.i.d. draws from `probs` over `0..probs.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Iid {
    pub probs: Vec<f64>,
}

impl Iid {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let m = Iid { probs };
        m.validate()?;
        Ok(m)
    }

    /// Binary i.i.d. with `P(1) = p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Iid::new(vec![1.0 - p, p])
    }

    pub fn validate(&self) -> Result<()> {
        if self.probs.len() < 2 {
            return Err(Error::InvalidModel("iid.probs needs >= 2 entries".into()));
        }
        check_distribution(&self.probs, "iid.probs")
    }
}

/// A process model; the JSON form is tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ProcessModel {
    Iid(Iid),
    Markov(Markov),
    Hmm(Hmm),
    Translation(Translation),
    Diagonal(DiagonalAdversary),
}

impl ProcessModel {
    pub fn bernoulli(p: f64) -> Result<Self> {
        Ok(ProcessModel::Iid(Iid::bernoulli(p)?))
    }

    pub fn two_state_markov(p: f64, q: f64) -> Result<Self> {
        Ok(ProcessModel::Markov(Markov::two_state(p, q)?))
    }

    /// Parses and validates a JSON model description.
    pub fn from_json(text: &str) -> Result<Self> {
        let m: ProcessModel = serde_json::from_str(text).map_err(|e| {
            let (line, column) = match e.line() {
                0 => locate_field(text, &e.to_string()),
                l => (l, e.column()),
            };
            Error::Parse(format!("model spec, line {line} column {column}: {e}"))
        })?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessModel::Iid(m) => m.validate(),
            ProcessModel::Markov(m) => m.validate(),
            ProcessModel::Hmm(m) => m.validate(),
            ProcessModel::Translation(m) => m.validate(),
            ProcessModel::Diagonal(m) => m.validate(),
        }
    }

    pub fn alphabet_size(&self) -> u32 {
        match self {
            ProcessModel::Iid(m) => m.probs.len() as u32,
            ProcessModel::Markov(m) => m.alphabet(),
            ProcessModel::Hmm(m) => m.alphabet(),
            ProcessModel::Translation(_) | ProcessModel::Diagonal(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ProcessModel::Iid(_) => "iid",
            ProcessModel::Markov(_) => "markov",
            ProcessModel::Hmm(_) => "hmm",
            ProcessModel::Translation(_) => "translation",
            ProcessModel::Diagonal(_) => "diagonal",
        }
    }

    pub(crate) fn forward_machine(&self) -> Result<ForwardMachine> {
        self.validate()?;
        match self {
            ProcessModel::Iid(m) => Ok(ForwardMachine {
                init: vec![1.0],
                trans: vec![vec![(0, 1.0)]],
                emit: m.probs.iter().map(|&p| vec![p]).collect(),
            }),
            ProcessModel::Markov(m) => m.forward_machine(),
            ProcessModel::Hmm(m) => m.forward_machine(),
            ProcessModel::Translation(_) | ProcessModel::Diagonal(_) => {
                Err(Error::UnsupportedModel(format!(
                    "{} model has no computable marginal probabilities",
                    self.kind()
                )))
            }
        }
    }

    /// Draws `n` symbols; identical `(model, n, seed)` give identical samples.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Sample> {
        if n == 0 {
            return Err(Error::InvalidArgument("sample length must be >= 1".into()));
        }
        self.validate()?;
        let symbols = match self {
            ProcessModel::Iid(m) => {
                let cdf = cumulative(&m.probs);
                let mut rng = rng_from_seed(seed);
                (0..n).map(|_| draw(&mut rng, &cdf) as u32).collect()
            }
            ProcessModel::Markov(m) => m.sample(n, seed)?,
            ProcessModel::Hmm(m) => m.sample(n, seed)?,
            ProcessModel::Translation(m) => m.sample(n, seed),
            ProcessModel::Diagonal(m) => m.sample(n, seed),
        };
        Sample::discrete(self.alphabet_size(), symbols)
    }

    /// Exact stationary probability that a window spells `word`.
    pub fn marginal_prob(&self, word: &[u32]) -> Result<f64> {
        if word.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let a = self.alphabet_size();
        if let Some(&s) = word.iter().find(|&&s| s >= a) {
            return Err(Error::AlphabetMismatch(format!(
                "symbol {s} outside the model alphabet of size {a}"
            )));
        }
        Ok(self.forward_machine()?.prob(word))
    }
}

// Tagged enums are buffered before the variant is parsed, so serde_json
// reports no position; point at the first occurrence of the quoted field
// name or offending value instead.
fn locate_field(text: &str, msg: &str) -> (usize, usize) {
    let token = match msg.split_once("string \"") {
        Some((_, rest)) => rest.split('"').next(),
        None => msg.split('`').nth(1),
    }
    .unwrap_or("");
    let at = if token.is_empty() {
        None
    } else {
        text.find(&format!("\"{token}\"")).or_else(|| text.find(token))
    };
    match at {
        Some(at) => {
            let before = &text[..at];
            let line = before.matches('\n').count() + 1;
            let column = at - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        }
        None => (1, 1),
    }
}

/// Draws a sample of length `n` from `model`.
pub fn sample(model: &ProcessModel, n: usize, seed: u64) -> Result<Sample> {
    model.sample(n, seed)
}

/// Exact stationary probability of `word` under `model`.
pub fn marginal_prob(model: &ProcessModel, word: &[u32]) -> Result<f64> {
    model.marginal_prob(word)
}
