//! Empirical distance between samples, and its convergence to the distance
//! between the generating processes.
//!
//!     cargo run --release --example distance

use ergodist::{
    dd_discrete, dd_model_model, dd_real, dd_sample_model, default_truncation, default_words, ProcessModel,
    Sample, Truncation,
};

fn main() -> ergodist::Result<()> {
    let p = ProcessModel::two_state_markov(0.2, 0.6)?;
    let q = ProcessModel::two_state_markov(0.3, 0.3)?;

    println!("{:>8} {:>6} {:>10} {:>10} {:>10}", "n", "k_max", "d(p,q)", "d̂(x,y)", "d̂(x,p)");
    for n in [100, 1_000, 10_000, 100_000] {
        let t = default_words(n);
        let x = p.sample(n, 1)?;
        let y = q.sample(n, 2)?;
        println!(
            "{n:>8} {:>6} {:>10.5} {:>10.5} {:>10.5}",
            t.max_len(),
            dd_model_model(&p, &q, &t)?.value,
            dd_discrete(&x, &y, &t)?.value,
            dd_sample_model(&x, &p, &t)?.value,
        );
    }

    let x = Sample::real(vec![0.12, 0.95, 0.33, 0.71, 0.05, 0.52, 0.88, 0.27])?;
    let y = Sample::real(vec![0.61, 0.14, 0.79, 0.42, 0.97, 0.08, 0.36, 0.66])?;
    let t = default_truncation(&x, &y)?;
    println!("\nreal samples, {t:?}: {:.6}", dd_real(&x, &y, &t)?.value);
    let exact = dd_real(&x, &y, &Truncation::exact_tail(3))?;
    println!("every dyadic level summed: {:.6}", exact.value);
    for term in exact.per_level.iter().filter(|t| t.m == 1) {
        println!("  m = 1, l = {:?}: term {:.4}, weight {:.6}", term.l, term.term, term.weight);
    }
    Ok(())
}
