//! Tests between finite sets of process models.
//!
//! `d̂(x, H)` is the smallest sample-to-model distance over the models of `H`.
//! The asymmetric test accepts `H0` when `d̂(x, H0)` is within a radius `γ`
//! calibrated by simulation so that samples from every model of `H0` fall
//! inside it with probability at least `1 - α`. The uniform test picks the
//! nearer hypothesis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::distance::{dd_sample_model, default_words, Truncation};
use crate::error::{Error, Result};
use crate::processes::rng::derive_seed;
use crate::processes::ProcessModel;
use crate::sample::Sample;

/// Default number of simulated samples per model when calibrating.
pub const DEFAULT_MC_RUNS: usize = 2000;

/// A finite, explicit set of process models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub label: String,
    pub models: Vec<ProcessModel>,
}

impl Hypothesis {
    pub fn new(label: impl Into<String>, models: Vec<ProcessModel>) -> Result<Self> {
        let h = Hypothesis { label: label.into(), models };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        let first = self
            .models
            .first()
            .ok_or_else(|| Error::InvalidArgument("a hypothesis needs at least one model".into()))?;
        for m in &self.models {
            m.validate()?;
            if m.alphabet_size() != first.alphabet_size() {
                return Err(Error::AlphabetMismatch(format!(
                    "hypothesis {:?} mixes alphabets of sizes {} and {}",
                    self.label,
                    first.alphabet_size(),
                    m.alphabet_size()
                )));
            }
        }
        Ok(())
    }

    pub fn alphabet_size(&self) -> u32 {
        self.models[0].alphabet_size()
    }

    /// SHA-256 of the canonical JSON of the model list (the label is not
    /// part of it), hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(&self.models).expect("models serialize");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// `min_{rho in H} d̂(x, rho)`.
pub fn dd_sample_hypothesis(x: &Sample, h: &Hypothesis, t: &Truncation) -> Result<f64> {
    h.validate()?;
    let mut best = f64::INFINITY;
    for m in &h.models {
        best = best.min(dd_sample_model(x, m, t)?.value);
    }
    Ok(best)
}

/// Simulated values of `d̂(X, H)` for samples `X` of every model of `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPool {
    pub n: usize,
    pub seed: u64,
    pub truncation: Truncation,
    /// `stats[j]`: sorted statistics of the samples drawn from model `j`.
    pub stats: Vec<Vec<f64>>,
}

impl CalibrationPool {
    /// Draws `runs` samples of length `n` from each model of `h`. Run `r` of
    /// model `j` uses seed `derive_seed(derive_seed(seed, j), r)`.
    pub fn simulate(h: &Hypothesis, n: usize, runs: usize, seed: u64, t: &Truncation) -> Result<Self> {
        h.validate()?;
        if n == 0 || runs == 0 {
            return Err(Error::InvalidArgument("calibration needs n >= 1 and runs >= 1".into()));
        }
        let stats = h
            .models
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let model_seed = derive_seed(seed, j as u64);
                let mut v = (0..runs)
                    .into_par_iter()
                    .map(|r| {
                        let x = m.sample(n, derive_seed(model_seed, r as u64))?;
                        dd_sample_hypothesis(&x, h, t)
                    })
                    .collect::<Result<Vec<f64>>>()?;
                v.sort_by(f64::total_cmp);
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CalibrationPool { n, seed, truncation: *t, stats })
    }

    /// Smallest `γ` such that, for every model, a fraction at least `theta`
    /// of its statistics is `<= γ`.
    pub fn gamma(&self, theta: f64) -> f64 {
        self.stats
            .iter()
            .map(|v| {
                let need = (theta * v.len() as f64 - 1e-9).ceil() as usize;
                if need == 0 {
                    0.0
                } else {
                    v[need.min(v.len()) - 1]
                }
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTable {
    pub hypothesis: Hypothesis,
    pub hypothesis_hash: String,
    pub n: usize,
    pub theta: f64,
    pub gamma: f64,
    pub mc_runs: usize,
    pub seed: u64,
    pub truncation: Truncation,
}

impl CalibrationTable {
    pub fn check(&self, h: &Hypothesis, n: usize, theta: f64) -> Result<()> {
        if self.hypothesis_hash != h.hash() {
            return Err(Error::CalibrationMismatch(format!(
                "table was built for hypothesis {}, not {}",
                self.hypothesis_hash,
                h.hash()
            )));
        }
        if self.n != n {
            return Err(Error::CalibrationMismatch(format!(
                "table was built for n = {}, sample has length {n}",
                self.n
            )));
        }
        if (self.theta - theta).abs() > 1e-12 {
            return Err(Error::CalibrationMismatch(format!(
                "table was built for theta = {}, test needs {theta}",
                self.theta
            )));
        }
        Ok(())
    }
}

/// Calibrates the acceptance radius `γ_n(H, θ)` by simulation, using the
/// default truncation for length-`n` samples.
pub fn calibrate_gamma(h: &Hypothesis, n: usize, theta: f64, mc_runs: usize, seed: u64) -> Result<CalibrationTable> {
    calibrate_gamma_with(h, n, theta, mc_runs, seed, &default_words(n))
}

/// [`calibrate_gamma`] with an explicit truncation.
pub fn calibrate_gamma_with(
    h: &Hypothesis,
    n: usize,
    theta: f64,
    mc_runs: usize,
    seed: u64,
    t: &Truncation,
) -> Result<CalibrationTable> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::InvalidArgument(format!("theta must lie in [0, 1), got {theta}")));
    }
    if mc_runs < 100 {
        return Err(Error::InvalidArgument(format!("mc_runs must be >= 100, got {mc_runs}")));
    }
    let gamma = if theta == 0.0 {
        h.validate()?;
        0.0
    } else {
        CalibrationPool::simulate(h, n, mc_runs, seed, t)?.gamma(theta)
    };
    Ok(CalibrationTable {
        hypothesis: h.clone(),
        hypothesis_hash: h.hash(),
        n,
        theta,
        gamma,
        mc_runs,
        seed,
        truncation: *t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Asymmetric,
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    /// 0 accepts `H0`, 1 rejects it.
    pub decision: u8,
    pub kind: TestKind,
    /// `d̂(x, H0)`.
    pub statistic: f64,
    /// `γ` for the asymmetric test, `d̂(x, H1)` for the uniform one.
    pub threshold: f64,
    pub truncation: Truncation,
}

/// The level-`alpha` test of `H0`: accept iff `d̂(x, H0) <= γ` with `γ` taken
/// from a table calibrated for `(H0, |x|, 1 - alpha)`.
pub fn asymmetric_test(x: &Sample, h0: &Hypothesis, alpha: f64, cal: &CalibrationTable) -> Result<TestVerdict> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    cal.check(h0, x.len(), 1.0 - alpha)?;
    let d = dd_sample_hypothesis(x, h0, &cal.truncation)?;
    Ok(TestVerdict {
        decision: u8::from(d > cal.gamma),
        kind: TestKind::Asymmetric,
        statistic: d,
        threshold: cal.gamma,
        truncation: cal.truncation,
    })
}

/// Accepts `H0` iff `d̂(x, H0) < d̂(x, H1)`; ties reject.
pub fn uniform_test(x: &Sample, h0: &Hypothesis, h1: &Hypothesis, t: &Truncation) -> Result<TestVerdict> {
    if let Some(m) = h0.models.iter().find(|m| h1.models.contains(m)) {
        return Err(Error::OverlappingHypotheses(format!(
            "a {} model belongs to both {:?} and {:?}",
            m.kind(),
            h0.label,
            h1.label
        )));
    }
    let d0 = dd_sample_hypothesis(x, h0, t)?;
    let d1 = dd_sample_hypothesis(x, h1, t)?;
    Ok(TestVerdict {
        decision: u8::from(d0 >= d1),
        kind: TestKind::Uniform,
        statistic: d0,
        threshold: d1,
        truncation: *t,
    })
}

/// The asymmetric test of the single model `rho0`.
pub fn goodness_of_fit(x: &Sample, rho0: &ProcessModel, alpha: f64, cal: &CalibrationTable) -> Result<TestVerdict> {
    let h0 = Hypothesis::new(cal.hypothesis.label.clone(), vec![rho0.clone()])?;
    asymmetric_test(x, &h0, alpha, cal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bern(p: f64) -> ProcessModel {
        ProcessModel::bernoulli(p).unwrap()
    }

    fn alternating(n: usize) -> Sample {
        Sample::discrete(2, (0..n as u32).map(|i| i % 2).collect()).unwrap()
    }

    #[test]
    fn hypothesis_distance() {
        let h = Hypothesis::new("extremes", vec![bern(0.1), bern(0.9)]).unwrap();
        let d = dd_sample_hypothesis(&alternating(10), &h, &Truncation::words(1)).unwrap();
        assert!((d - 0.4).abs() < 1e-15);
        let single = Hypothesis::new("one", vec![bern(0.3)]).unwrap();
        let x = alternating(8);
        let t = Truncation::words(3);
        assert_eq!(
            dd_sample_hypothesis(&x, &single, &t).unwrap(),
            dd_sample_model(&x, &bern(0.3), &t).unwrap().value
        );
    }

    #[test]
    fn hash_ignores_label_and_tracks_models() {
        let a = Hypothesis::new("a", vec![bern(0.5)]).unwrap();
        let b = Hypothesis::new("b", vec![bern(0.5)]).unwrap();
        let c = Hypothesis::new("a", vec![bern(0.6)]).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn gamma_rules() {
        let h = Hypothesis::new("fair", vec![bern(0.5)]).unwrap();
        assert_eq!(calibrate_gamma(&h, 200, 0.0, 100, 1).unwrap().gamma, 0.0);
        assert!(calibrate_gamma(&h, 200, 1.0, 100, 1).is_err());
        assert!(calibrate_gamma(&h, 200, 0.5, 99, 1).is_err());
        let pool = CalibrationPool::simulate(&h, 200, 300, 5, &default_words(200)).unwrap();
        let mut prev = 0.0;
        for i in 0..100 {
            let g = pool.gamma(i as f64 / 100.0);
            assert!(g >= prev);
            prev = g;
        }
        // coverage
        let g = pool.gamma(0.9);
        let inside = pool.stats[0].iter().filter(|&&d| d <= g).count();
        assert!(inside as f64 >= 0.9 * 300.0);
    }

    #[test]
    fn degenerate_model_accepts_its_sample() {
        let h = Hypothesis::new("ones", vec![bern(1.0)]).unwrap();
        let cal = calibrate_gamma(&h, 50, 0.95, 100, 3).unwrap();
        assert_eq!(cal.gamma, 0.0);
        let x = Sample::discrete(2, vec![1; 50]).unwrap();
        assert_eq!(asymmetric_test(&x, &h, 0.05, &cal).unwrap().decision, 0);
        let mut v = vec![1; 50];
        v[7] = 0;
        let y = Sample::discrete(2, v).unwrap();
        assert_eq!(goodness_of_fit(&y, &bern(1.0), 0.05, &cal).unwrap().decision, 1);
    }

    #[test]
    fn calibration_mismatch() {
        let h = Hypothesis::new("fair", vec![bern(0.5)]).unwrap();
        let cal = calibrate_gamma(&h, 100, 0.95, 100, 3).unwrap();
        let x = alternating(100);
        assert!(matches!(asymmetric_test(&x, &h, 0.1, &cal), Err(Error::CalibrationMismatch(_))));
        assert!(matches!(
            asymmetric_test(&alternating(99), &h, 0.05, &cal),
            Err(Error::CalibrationMismatch(_))
        ));
        let other = Hypothesis::new("fair", vec![bern(0.4)]).unwrap();
        assert!(matches!(asymmetric_test(&x, &other, 0.05, &cal), Err(Error::CalibrationMismatch(_))));
    }

    #[test]
    fn uniform_test_rules() {
        let h0 = Hypothesis::new("low", vec![bern(0.2)]).unwrap();
        let h1 = Hypothesis::new("high", vec![bern(0.8)]).unwrap();
        // a balanced sample is equally far from both at word length 1
        let t1 = Truncation::words(1);
        let tie = uniform_test(&alternating(100), &h0, &h1, &t1).unwrap();
        assert_eq!(tie.statistic, tie.threshold);
        assert_eq!(tie.decision, 1);
        let swapped = uniform_test(&alternating(100), &h1, &h0, &t1).unwrap();
        assert_eq!(swapped.decision, 1);

        let t = Truncation::words(3);

        let x = bern(0.2).sample(3000, 8).unwrap();
        assert_eq!(uniform_test(&x, &h0, &h1, &t).unwrap().decision, 0);
        assert_eq!(uniform_test(&x, &h1, &h0, &t).unwrap().decision, 1);
        let dup = Hypothesis::new("low", vec![bern(0.2), bern(0.2)]).unwrap();
        assert_eq!(uniform_test(&x, &dup, &h1, &t).unwrap().decision, 0);
        assert!(matches!(uniform_test(&x, &h0, &dup, &t), Err(Error::OverlappingHypotheses(_))));
    }
}
