//! Alphabets, samples and pattern frequencies.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantize::Cell;

/// The value space of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alphabet {
    /// Symbols `0..size`.
    Discrete(u32),
    /// Finite real numbers.
    Real,
}

impl Alphabet {
    pub fn discrete(size: u32) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidSample(format!(
                "discrete alphabet size must be >= 2, got {size}"
            )));
        }
        Ok(Alphabet::Discrete(size))
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Alphabet::Discrete(_))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Discrete(s) => write!(f, "discrete({s})"),
            Alphabet::Real => f.write_str("real"),
        }
    }
}

/// A finite, non-empty sequence over an [`Alphabet`].
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Discrete { size: u32, symbols: Vec<u32> },
    Real(Vec<f64>),
}

impl Sample {
    /// A discrete sample over `0..size`.
    pub fn discrete(size: u32, symbols: Vec<u32>) -> Result<Self> {
        Alphabet::discrete(size)?;
        if symbols.is_empty() {
            return Err(Error::InvalidSample("sample must have length >= 1".into()));
        }
        if let Some((i, &s)) = symbols.iter().enumerate().find(|(_, &s)| s >= size) {
            return Err(Error::InvalidSample(format!(
                "symbol {s} at position {i} is outside alphabet of size {size}"
            )));
        }
        Ok(Sample::Discrete { size, symbols })
    }

    /// A binary sample from a string of `0`/`1` characters, handy for fixtures.
    pub fn binary(bits: &str) -> Result<Self> {
        let symbols = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSample(format!("not a binary digit: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Sample::discrete(2, symbols)
    }

    /// A real-valued sample; every value must be finite.
    pub fn real(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSample("sample must have length >= 1".into()));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidSample(format!(
                "value {v} at position {i} is not finite"
            )));
        }
        Ok(Sample::Real(values))
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Sample::Discrete { size, .. } => Alphabet::Discrete(*size),
            Sample::Real(_) => Alphabet::Real,
        }
    }

    /// Alphabet size of a discrete sample.
    pub fn alphabet_size(&self) -> Option<u32> {
        match self {
            Sample::Discrete { size, .. } => Some(*size),
            Sample::Real(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Sample::Discrete { symbols, .. } => symbols.len(),
            Sample::Real(v) => v.len(),
        }
    }

    /// Always false: samples are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn symbols(&self) -> Option<&[u32]> {
        match self {
            Sample::Discrete { symbols, .. } => Some(symbols),
            Sample::Real(_) => None,
        }
    }

    pub fn values(&self) -> Option<&[f64]> {
        match self {
            Sample::Real(v) => Some(v),
            Sample::Discrete { .. } => None,
        }
    }

    /// The contiguous sub-sample `start..end` (0-based, end exclusive).
    pub fn slice(&self, start: usize, end: usize) -> Result<Sample> {
        if start >= end || end > self.len() {
            return Err(Error::InvalidArgument(format!(
                "slice {start}..{end} is empty or out of bounds for length {}",
                self.len()
            )));
        }
        Ok(match self {
            Sample::Discrete { size, symbols } => Sample::Discrete {
                size: *size,
                symbols: symbols[start..end].to_vec(),
            },
            Sample::Real(v) => Sample::Real(v[start..end].to_vec()),
        })
    }

    /// Re-labels a discrete sample onto a larger alphabet.
    pub fn widen(&self, size: u32) -> Result<Sample> {
        match self {
            Sample::Discrete { size: s, symbols } if *s <= size => {
                Sample::discrete(size, symbols.clone())
            }
            _ => Err(Error::AlphabetMismatch(format!(
                "cannot widen {} to discrete({size})",
                self.alphabet()
            ))),
        }
    }
}

/// Checks that all samples share one alphabet.
pub fn common_alphabet<'a>(samples: impl IntoIterator<Item = &'a Sample>) -> Result<Alphabet> {
    let mut it = samples.into_iter();
    let first = it
        .next()
        .ok_or_else(|| Error::InvalidArgument("no samples given".into()))?
        .alphabet();
    for s in it {
        if s.alphabet() != first {
            return Err(Error::AlphabetMismatch(format!(
                "{} vs {}",
                first,
                s.alphabet()
            )));
        }
    }
    Ok(first)
}

/// An exact frequency: `count` matching windows out of `windows`.
///
/// `windows == 0` encodes the "sample shorter than pattern" case whose value is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frequency {
    pub count: u64,
    pub windows: u64,
}

impl Frequency {
    pub fn value(&self) -> f64 {
        if self.windows == 0 {
            0.0
        } else {
            self.count as f64 / self.windows as f64
        }
    }
}

/// A pattern whose frequency can be measured in a sample.
#[derive(Debug, Clone, PartialEq)]
pub enum Pattern<'a> {
    Word(&'a [u32]),
    Cell(&'a Cell),
}

impl Pattern<'_> {
    fn len(&self) -> usize {
        match self {
            Pattern::Word(w) => w.len(),
            Pattern::Cell(c) => c.dim(),
        }
    }
}

/// Frequency with which the windows of `x` fall into `pattern`, by direct scan.
///
/// Returns `count / (n - k + 1)` when `n >= k` and zero otherwise.
pub fn frequency(x: &Sample, pattern: Pattern<'_>) -> Result<Frequency> {
    let k = pattern.len();
    if k == 0 {
        return Err(Error::EmptyPattern);
    }
    let n = x.len();
    if n < k {
        // still validate the alphabet
        match (&pattern, x) {
            (Pattern::Word(_), Sample::Discrete { .. }) | (Pattern::Cell(_), Sample::Real(_)) => {}
            _ => return Err(mismatch(x, &pattern)),
        }
        return Ok(Frequency { count: 0, windows: 0 });
    }
    let windows = (n - k + 1) as u64;
    let count = match (&pattern, x) {
        (Pattern::Word(w), Sample::Discrete { size, symbols }) => {
            if let Some(&s) = w.iter().find(|&&s| s >= *size) {
                return Err(Error::AlphabetMismatch(format!(
                    "word symbol {s} outside alphabet discrete({size})"
                )));
            }
            symbols.windows(k).filter(|win| win == w).count()
        }
        (Pattern::Cell(c), Sample::Real(v)) => v.windows(k).filter(|win| c.contains(win)).count(),
        _ => return Err(mismatch(x, &pattern)),
    };
    Ok(Frequency { count: count as u64, windows })
}

fn mismatch(x: &Sample, p: &Pattern<'_>) -> Error {
    let kind = match p {
        Pattern::Word(_) => "word pattern",
        Pattern::Cell(_) => "cell pattern",
    };
    Error::AlphabetMismatch(format!("{kind} applied to {} sample", x.alphabet()))
}
