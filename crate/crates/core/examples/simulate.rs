//! Drawing samples from each supported process model.
//!
//!     cargo run --example simulate

use ergodist::processes::{AdversaryStart, DiagonalAdversary, Translation};
use ergodist::ProcessModel;

fn show(name: &str, m: &ProcessModel) -> ergodist::Result<()> {
    let x = m.sample(60, 7)?;
    let s: String = x.symbols().unwrap().iter().map(|v| char::from_digit(*v, 10).unwrap()).collect();
    println!("{name:<12} {s}");
    Ok(())
}

fn main() -> ergodist::Result<()> {
    show("iid", &ProcessModel::bernoulli(0.3)?)?;
    show("markov", &ProcessModel::two_state_markov(0.05, 0.1)?)?;
    show(
        "hmm",
        &ProcessModel::from_json(
            r#"{"type": "hmm", "transitions": [[0.95, 0.05], [0.1, 0.9]],
                "emissions": [[0.9, 0.1], [0.2, 0.8]], "init": "stationary"}"#,
        )?,
    )?;
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    show("translation", &ProcessModel::Translation(Translation::new(golden, None)?))?;
    let d = DiagonalAdversary::new(0.1, vec![2, 5, 9])?.with_start(AdversaryStart::Zero);
    show("diagonal", &ProcessModel::Diagonal(d))?;

    let m = ProcessModel::two_state_markov(0.05, 0.1)?;
    println!("\nmodel file form: {}", serde_json::to_string(&m).unwrap());
    println!("P(00) = {:.4}, P(01) = {:.4}", m.marginal_prob(&[0, 0])?, m.marginal_prob(&[0, 1])?);
    Ok(())
}
