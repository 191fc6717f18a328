//! Sum-information: a weighted measure of dependence among aligned samples.
//!
//!     cargo run --release --example sum_information

use ergodist::{sum_information, ProcessModel, Sample, Truncation};

fn main() -> ergodist::Result<()> {
    let n = 50_000;
    let x = ProcessModel::bernoulli(0.5)?.sample(n, 1)?;
    let y = ProcessModel::bernoulli(0.5)?.sample(n, 2)?;
    let t = Truncation::words(6);

    let independent = sum_information(&[x.clone(), y.clone()], &t)?;
    println!("independent coins: {:.5}", independent.value);

    for flip in [2, 5, 20, 100] {
        let copy: Vec<u32> = x
            .symbols()
            .unwrap()
            .iter()
            .zip(y.symbols().unwrap())
            .enumerate()
            .map(|(i, (&a, &b))| if i % flip == 0 { b } else { a })
            .collect();
        let s = sum_information(&[x.clone(), Sample::discrete(2, copy)?], &t)?;
        println!("copy with 1 in {flip} symbols replaced: {:.5}", s.value);
    }
    Ok(())
}
