//! The switch/reset chain behind the impossibility of telling "same" from
//! "different" process: it spends long stretches looking like one source,
//! then another, so any fixed test is eventually fooled.
//!
//!     cargo run --release --example diagonal_adversary

use ergodist::processes::{AdversaryStart, DiagonalAdversary};
use ergodist::{dd_discrete, ProcessModel, Sample, Truncation};

fn main() -> ergodist::Result<()> {
    let d = DiagonalAdversary::new(0.01, vec![50, 400, 3000])?.with_start(AdversaryStart::Zero);
    let tr = d.simulate(200_000, 11);
    println!("returns to state 0: {} ({:.4} per step)", tr.returns_to_zero, tr.returns_to_zero as f64 / 2e5);
    for p in tr.passages.iter().take(8) {
        println!("  t = {:>6}: switch {} sent the chain {}", p.time, p.switch, if p.up { "up" } else { "down" });
    }

    // block-by-block distance to the all-ones source
    let ones = ProcessModel::bernoulli(1.0)?.sample(5000, 0)?;
    let t = Truncation::words(8);
    let blocks: Vec<String> = tr
        .symbols
        .chunks(5000)
        .take(20)
        .map(|b| Ok(format!("{:.2}", dd_discrete(&Sample::discrete(2, b.to_vec())?, &ones, &t)?.value)))
        .collect::<ergodist::Result<_>>()?;
    println!("d̂(block, 111...) per 5000 steps: {}", blocks.join(" "));
    Ok(())
}
