//! Seeded randomness.
//!
//! All simulation goes through ChaCha8 seeded with `seed_from_u64`, which is
//! portable across platforms and releases of `rand_chacha`. Draws use only
//! `gen::<f64>()` / `gen::<u64>()` and explicit inverse-CDF lookups, so a
//! `(model, n, seed)` triple always produces the same sample.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent per-run seed for run `stream` of an experiment seeded with `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x5EED)))
}

/// Cumulative sums of a probability vector, for inverse-CDF draws.
pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

/// Index `i` with `cdf[i-1] <= u < cdf[i]`; rounding slack goes to the last
/// index with positive mass.
pub(crate) fn draw(rng: &mut SimRng, cdf: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let i = cdf.partition_point(|&c| c <= u);
    if i < cdf.len() {
        return i;
    }
    let mut last = cdf.len() - 1;
    while last > 0 && cdf[last] == cdf[last - 1] {
        last -= 1;
    }
    last
}

pub(crate) fn coin(rng: &mut SimRng, p: f64) -> bool {
    rng.gen::<f64>() < p
}
