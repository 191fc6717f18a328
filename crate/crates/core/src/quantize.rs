//! Dyadic cells of `R^m` and quantization of real samples into them.
//!
//! A cell at level `l` with coordinates `c` is the half-open cube
//! `prod_i [c_i 2^-l, (c_i + 1) 2^-l)`. Coordinates are signed, so the cells
//! tile all of `R^m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::Sample;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    level: u32,
    coords: Vec<i64>,
}

impl Cell {
    pub fn new(level: u32, coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(Cell { level, coords })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Pattern length `m`.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `2^(-m l)`.
    pub fn volume(&self) -> f64 {
        (-(self.level as f64) * self.coords.len() as f64).exp2()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.coords.len()
            && point
                .iter()
                .zip(&self.coords)
                .all(|(&x, &c)| floor_coord(x, self.level) == c as f64)
    }

    /// The cell one level up that contains this one.
    pub fn parent(&self) -> Option<Cell> {
        let level = self.level.checked_sub(1)?;
        Some(Cell {
            level,
            coords: self.coords.iter().map(|c| c.div_euclid(2)).collect(),
        })
    }
}

/// `floor(x 2^l)` as an integer-valued float; exact for every finite `x`.
pub(crate) fn floor_coord(x: f64, level: u32) -> f64 {
    (x * (level as f64).exp2()).floor()
}

/// One-dimensional level-`l` coordinates of every value.
pub(crate) fn level_coords(values: &[f64], level: u32) -> Vec<f64> {
    values.iter().map(|&x| floor_coord(x, level)).collect()
}

/// Maps the level-`l` coordinates of several real sequences onto a shared
/// dense symbol range `0..count`, preserving equality.
pub(crate) fn rank_levels(seqs: &[&[f64]], level: u32) -> (Vec<Vec<u32>>, u32) {
    let coords: Vec<Vec<f64>> = seqs.iter().map(|s| level_coords(s, level)).collect();
    let mut all: Vec<f64> = coords.iter().flatten().copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    let ranked = coords
        .iter()
        .map(|c| {
            c.iter()
                .map(|v| all.binary_search_by(|p| p.total_cmp(v)).unwrap() as u32)
                .collect()
        })
        .collect();
    (ranked, all.len() as u32)
}

/// Quantizes every length-`m` window of a real sample into its level-`l` cell.
///
/// Returns `n - m + 1` cells; fails if a coordinate does not fit in `i64`.
pub fn quantize(x: &Sample, m: usize, level: u32) -> Result<Vec<Cell>> {
    let values = x.values().ok_or_else(|| {
        Error::AlphabetMismatch(format!("quantize needs a real sample, got {}", x.alphabet()))
    })?;
    if m == 0 {
        return Err(Error::EmptyPattern);
    }
    if m > values.len() {
        return Err(Error::InvalidArgument(format!(
            "window length {m} exceeds sample length {}",
            values.len()
        )));
    }
    let coords = level_coords(values, level)
        .into_iter()
        .map(|c| {
            if c.abs() < 9.2e18 {
                Ok(c as i64)
            } else {
                Err(Error::InvalidArgument(format!(
                    "cell coordinate {c:e} at level {level} does not fit in 64 bits"
                )))
            }
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(coords
        .windows(m)
        .map(|w| Cell { level, coords: w.to_vec() })
        .collect())
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::sample::{frequency, Pattern};

    #[test]
    fn unit_level_examples() {
        let x = Sample::real(vec![0.3, 0.7]).unwrap();
        let cells = quantize(&x, 1, 1).unwrap();
        assert_eq!(cells[0].coords(), &[0]);
        assert_eq!(cells[1].coords(), &[1]);

        let neg = Sample::real(vec![-0.1]).unwrap();
        assert_eq!(quantize(&neg, 1, 2).unwrap()[0].coords(), &[-1]);
    }

    #[test]
    fn worked_example_through_quantize() {
        let x = Sample::real(vec![0.5, 1.5, 1.2, 1.4, 2.1]).unwrap();
        let cells = quantize(&x, 2, 0).unwrap();
        assert_eq!(cells.len(), 4);
        let target = Cell::new(0, vec![1, 1]).unwrap();
        let hits = cells.iter().filter(|c| **c == target).count();
        assert_eq!(hits as f64 / cells.len() as f64, 0.5);
        let direct = frequency(&x, Pattern::Cell(&target)).unwrap().value();
        assert_eq!(direct, 0.5);
    }

    #[test]
    fn parent_frequency_is_sum_of_children() {
        let x = Sample::real(vec![0.11, -0.4, 0.93, 0.5, 0.51, 0.12, -0.7, 0.33]).unwrap();
        for m in 1..=3 {
            for l in 1..6 {
                let fine = quantize(&x, m, l).unwrap();
                let coarse = quantize(&x, m, l - 1).unwrap();
                let mut child_mass: HashMap<Cell, usize> = HashMap::new();
                for c in &fine {
                    *child_mass.entry(c.parent().unwrap()).or_default() += 1;
                }
                let mut parent_mass: HashMap<Cell, usize> = HashMap::new();
                for c in &coarse {
                    *parent_mass.entry(c.clone()).or_default() += 1;
                }
                assert_eq!(child_mass, parent_mass);
            }
        }
    }

    #[test]
    fn cell_volume_and_containment() {
        let c = Cell::new(2, vec![1, -1]).unwrap();
        assert_eq!(c.volume(), 1.0 / 16.0);
        assert!(c.contains(&[0.25, -0.25]));
        assert!(!c.contains(&[0.5, -0.25]));
    }
}
