//! Word and cell frequencies: direct scans, the suffix-array index, and
//! dyadic quantization of real-valued windows.
//!
//!     cargo run --example frequencies

use ergodist::quantize::{quantize, Cell};
use ergodist::{frequency, KGramIndex, Pattern, Sample};

fn main() -> ergodist::Result<()> {
    let x = Sample::binary("0110101101101011")?;
    let idx = KGramIndex::build(&x)?;
    for k in 1..=3 {
        let table = idx.kgram_frequencies(k)?;
        let row: Vec<String> = table
            .iter()
            .map(|(w, f)| format!("{}:{}/{}", w.iter().map(|s| s.to_string()).collect::<String>(), f.count, f.windows))
            .collect();
        println!("k = {k}: {}", row.join("  "));
    }
    println!("count of 101 = {}", idx.count(&[1, 0, 1]));
    println!("nu(x, 11) by direct scan = {}", frequency(&x, Pattern::Word(&[1, 1]))?.value());

    // pairs of consecutive values falling in [1, 2) x [1, 2)
    let r = Sample::real(vec![0.5, 1.5, 1.2, 1.4, 2.1])?;
    let cell = Cell::new(0, vec![1, 1])?;
    println!("nu(r, [1,2)^2) = {}", frequency(&r, Pattern::Cell(&cell))?.value());

    let cells = quantize(&r, 2, 1)?;
    let shown: Vec<String> = cells.iter().map(|c| format!("{:?}", c.coords())).collect();
    println!("pairs at level 1 (cells of side 1/2): {}", shown.join(" "));
    Ok(())
}
