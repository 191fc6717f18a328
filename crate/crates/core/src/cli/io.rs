//! Sample and model files.
//!
//! A sample file is either a JSON array of numbers or text with one value
//! per line, where `#` starts a comment. Model files hold one model object or
//! an array of them.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::processes::ProcessModel;
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AlphabetChoice {
    /// Discrete when every value of every input is a non-negative integer.
    Auto,
    Discrete,
    Real,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Values of a sample file.
pub fn parse_values(text: &str, origin: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("{origin}: line {} column {}: {e}", e.line(), e.column()))
        })?
    } else {
        let mut v = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let x: f64 = body.parse().map_err(|_| {
                Error::Parse(format!("{origin}: line {}: {body:?} is not a number", i + 1))
            })?;
            v.push(x);
        }
        v
    };
    if values.is_empty() {
        return Err(Error::InvalidSample(format!("{origin}: no values")));
    }
    if let Some(i) = values.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidSample(format!("{origin}: value {} is not finite", i + 1)));
    }
    Ok(values)
}

fn is_symbol(x: f64) -> bool {
    x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(31)
}

/// Turns parsed series into samples over one shared alphabet.
///
/// Discrete series share the alphabet `0..=max`, of size at least 2 (or
/// `min_size` when larger).
pub fn to_samples(series: &[(String, Vec<f64>)], choice: AlphabetChoice, min_size: u32) -> Result<Vec<Sample>> {
    let all_symbols = series.iter().all(|(_, v)| v.iter().all(|&x| is_symbol(x)));
    let discrete = match choice {
        AlphabetChoice::Auto => all_symbols,
        AlphabetChoice::Real => false,
        AlphabetChoice::Discrete => {
            if let Some((name, v)) = series.iter().find(|(_, v)| !v.iter().all(|&x| is_symbol(x))) {
                let bad = v.iter().find(|&&x| !is_symbol(x)).unwrap();
                return Err(Error::AlphabetMismatch(format!(
                    "{name}: {bad} is not a non-negative integer symbol"
                )));
            }
            true
        }
    };
    if !discrete {
        return series.iter().map(|(_, v)| Sample::real(v.clone())).collect();
    }
    let max = series.iter().flat_map(|(_, v)| v.iter()).fold(0.0f64, |a, &b| a.max(b));
    let size = (max as u32 + 1).max(2).max(min_size);
    series
        .iter()
        .map(|(_, v)| Sample::discrete(size, v.iter().map(|&x| x as u32).collect()))
        .collect()
}

/// Reads sample files and harmonizes their alphabet.
pub fn load_samples(paths: &[impl AsRef<Path>], choice: AlphabetChoice) -> Result<Vec<Sample>> {
    let series = paths
        .iter()
        .map(|p| {
            let p = p.as_ref();
            let name = p.display().to_string();
            let values = parse_values(&read(p)?, &name)?;
            Ok((name, values))
        })
        .collect::<Result<Vec<_>>>()?;
    to_samples(&series, choice, 2)
}

/// Models in one file: a single model object or an array of them.
pub fn parse_models(text: &str, origin: &str) -> Result<Vec<ProcessModel>> {
    let with_origin = |e: Error| match e {
        Error::Parse(m) => Error::Parse(format!("{origin}: {m}")),
        other => other,
    };
    if text.trim_start().starts_with('[') {
        let values: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("{origin}: line {} column {}: {e}", e.line(), e.column()))
        })?;
        values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                ProcessModel::from_json(&v.to_string()).map_err(|e| match e {
                    Error::Parse(m) => Error::Parse(format!("{origin}: model {i}: {m}")),
                    other => other,
                })
            })
            .collect()
    } else {
        ProcessModel::from_json(text).map(|m| vec![m]).map_err(with_origin)
    }
}

pub fn load_models(paths: &[impl AsRef<Path>]) -> Result<Vec<ProcessModel>> {
    let mut out = Vec::new();
    for p in paths {
        let p = p.as_ref();
        out.extend(parse_models(&read(p)?, &p.display().to_string())?);
    }
    Ok(out)
}

/// One value per line.
pub fn format_csv(x: &Sample) -> String {
    let mut s = String::with_capacity(x.len() * 2);
    match x {
        Sample::Discrete { symbols, .. } => symbols.iter().for_each(|v| {
            s.push_str(&v.to_string());
            s.push('\n');
        }),
        Sample::Real(v) => v.iter().for_each(|v| {
            s.push_str(&v.to_string());
            s.push('\n');
        }),
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_values() {
        let v = parse_values("# header\n0\n1 # one\n\n2\n", "t").unwrap();
        assert_eq!(v, vec![0.0, 1.0, 2.0]);
        assert_eq!(parse_values("[0.5, 1.5]", "t").unwrap(), vec![0.5, 1.5]);
        let e = parse_values("0\nx\n", "t").unwrap_err();
        assert!(e.to_string().contains("line 2"));
        assert!(parse_values("# nothing\n", "t").is_err());
    }

    #[test]
    fn alphabet_detection() {
        let s = to_samples(&[("a".into(), vec![0.0, 1.0]), ("b".into(), vec![2.0])], AlphabetChoice::Auto, 2).unwrap();
        assert_eq!(s[0].alphabet_size(), Some(3));
        assert_eq!(s[1].alphabet_size(), Some(3));
        let s = to_samples(&[("a".into(), vec![0.0, 0.5])], AlphabetChoice::Auto, 2).unwrap();
        assert!(s[0].values().is_some());
        assert!(to_samples(&[("a".into(), vec![0.5])], AlphabetChoice::Discrete, 2).is_err());
        let s = to_samples(&[("a".into(), vec![0.0])], AlphabetChoice::Auto, 2).unwrap();
        assert_eq!(s[0].alphabet_size(), Some(2));
    }

    #[test]
    fn model_arrays() {
        let ms = parse_models(
            r#"[{"type": "iid", "probs": [0.5, 0.5]}, {"type": "iid", "probs": [0.1, 0.9]}]"#,
            "m.json",
        )
        .unwrap();
        assert_eq!(ms.len(), 2);
        let e = parse_models(r#"[{"type": "iid", "probs": [0.5, 0.6]}]"#, "m.json").unwrap_err();
        assert!(e.to_string().contains("iid.probs"));
        let e = parse_models("{\"type\": \"iid\",\n \"p\": 1}", "m.json").unwrap_err();
        assert!(e.to_string().contains("m.json") && e.to_string().contains("line 2"), "{e}");
    }
}
