//! Grouping samples by their generating process when the number of groups is
//! known.
//!
//!     cargo run --release --example cluster

use ergodist::{cluster_offline, clustering_error, default_words, ProcessModel};

fn main() -> ergodist::Result<()> {
    let models = [
        ProcessModel::bernoulli(0.3)?,
        ProcessModel::two_state_markov(0.15, 0.35)?,
        ProcessModel::two_state_markov(0.1, 0.2)?,
    ];
    // the first two share their one-symbol marginals; only longer words separate them
    let truth = [0, 1, 2, 0, 1, 2, 2, 1, 0, 0];
    let n = 4000;
    let samples = truth
        .iter()
        .enumerate()
        .map(|(i, &g)| models[g].sample(n, i as u64))
        .collect::<ergodist::Result<Vec<_>>>()?;
    let c = cluster_offline(&samples, 3, &default_words(n))?;
    println!("centers {:?}", c.centers);
    println!("clusters {:?}", c.clusters());
    println!("distance evaluations {}", c.distance_evaluations);
    println!("error against truth {}", clustering_error(&c, &truth)?);
    Ok(())
}
