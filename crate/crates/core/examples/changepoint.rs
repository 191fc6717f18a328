//! Locating changes of distribution inside a single sample.
//!
//!     cargo run --release --example changepoint

use ergodist::{
    default_words, list_changepoints, multi_changepoint_known_k, multi_changepoint_known_r,
    single_changepoint, ProcessModel, Sample,
};

fn piecewise(parts: &[(&ProcessModel, usize)], seed: u64) -> ergodist::Result<Sample> {
    let mut v = Vec::new();
    for (i, (m, len)) in parts.iter().enumerate() {
        v.extend_from_slice(m.sample(*len, seed + i as u64)?.symbols().unwrap());
    }
    Sample::discrete(2, v)
}

fn main() -> ergodist::Result<()> {
    let a = ProcessModel::two_state_markov(0.2, 0.2)?;
    let b = ProcessModel::two_state_markov(0.8, 0.8)?;

    // same single-symbol frequencies on both sides of the change
    let z = piecewise(&[(&a, 6000), (&b, 14_000)], 1)?;
    let t = default_words(z.len());
    let e = single_changepoint(&z, 0.1, 0.9, &t)?;
    println!("single: theta = {:.4} (true 0.3)", e.thetas[0]);

    let z = piecewise(&[(&a, 10_000), (&b, 10_000), (&a, 10_000), (&b, 10_000)], 2)?;
    let t = default_words(z.len());
    let e = multi_changepoint_known_k(&z, 3, 0.2, &t)?;
    println!("three changes: {:?}", e.thetas);

    let list = list_changepoints(&z, 0.2, &t)?;
    for (rank, c) in list.iter().enumerate() {
        println!("  rank {}: theta {:.4}, score {:.4}", rank + 1, c.theta, c.score);
    }

    let (kappa, e) = multi_changepoint_known_r(&z, 2, 0.2, &t)?;
    println!("two processes: {kappa} changes at {:?}", e.thetas);
    Ok(())
}
