//! Three-sample classification: which of two reference samples was generated
//! by the same process as a third?
//!
//!     cargo run --release --example classify

use ergodist::{default_words, three_sample, Label, ProcessModel};

fn main() -> ergodist::Result<()> {
    let a = ProcessModel::two_state_markov(0.2, 0.6)?;
    let b = ProcessModel::two_state_markov(0.6, 0.2)?;
    for n in [50, 200, 1000, 5000] {
        let t = default_words(n);
        let mut correct = 0;
        for seed in 0..100 {
            let x = a.sample(n, 3 * seed)?;
            let y = b.sample(n, 3 * seed + 1)?;
            let z = a.sample(n, 3 * seed + 2)?;
            if three_sample(&x, &y, &z, &t)?.label == Label::X {
                correct += 1;
            }
        }
        println!("n = {n:>5}: {correct}/100 correct");
    }
    Ok(())
}
