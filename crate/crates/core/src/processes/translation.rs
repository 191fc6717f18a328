use serde::{Deserialize, Serialize};

use super::rng::rng_from_seed;
use crate::error::{Error, Result};
use rand::Rng;

const HALF: u64 = 1 << 63;

/// Thresholded rotation of the circle: `r_i = (r_{i-1} + alpha) mod 1`,
/// `X_i = 1{r_i > 1/2}`, with `r_0` uniform unless pinned.
///
/// Hidden states are held as 64-bit fixed-point fractions, so the rotation is
/// exact modulo 1. The process is ergodic only for irrational `alpha`; rational
/// values are accepted and give periodic, deterministic fixtures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Translation {
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
}

fn to_fixed(x: f64) -> u64 {
    // x in [0, 1); 2^64 * x rounded down, saturating just below 1
    (x * 18_446_744_073_709_551_616.0) as u64
}

impl Translation {
    pub fn new(alpha: f64, r0: Option<f64>) -> Result<Self> {
        let t = Translation { alpha, r0 };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidModel(format!(
                "translation.alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if let Some(r0) = self.r0 {
            if !(0.0..1.0).contains(&r0) {
                return Err(Error::InvalidModel(format!(
                    "translation.r0 must lie in [0, 1), got {r0}"
                )));
            }
        }
        Ok(())
    }

    /// The rotation step as a fixed-point fraction of the circle.
    pub fn step(&self) -> u64 {
        to_fixed(self.alpha)
    }

    /// Hidden states `r_1..r_n` as fixed-point fractions (`r / 2^64`).
    pub fn hidden_states(&self, n: usize, seed: u64) -> Vec<u64> {
        let mut r = match self.r0 {
            Some(r0) => to_fixed(r0),
            None => rng_from_seed(seed).gen::<u64>(),
        };
        let step = self.step();
        (0..n)
            .map(|_| {
                r = r.wrapping_add(step);
                r
            })
            .collect()
    }

    pub(crate) fn sample(&self, n: usize, seed: u64) -> Vec<u32> {
        self.hidden_states(n, seed)
            .into_iter()
            .map(|r| u32::from(r > HALF))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rotation_alternates() {
        let t = Translation::new(0.5, Some(0.3)).unwrap();
        assert_eq!(t.sample(6, 0), vec![1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn rotation_is_exact_mod_one() {
        let t = Translation::new(0.618_033_988_749_895, None).unwrap();
        let r = t.hidden_states(10_000, 7);
        assert!(r.windows(2).all(|w| w[1].wrapping_sub(w[0]) == t.step()));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Translation::new(0.0, None).is_err());
        assert!(Translation::new(1.0, None).is_err());
        assert!(Translation::new(0.3, Some(1.0)).is_err());
    }
}
