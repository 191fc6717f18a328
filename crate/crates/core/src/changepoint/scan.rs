//! `d̂(z[..t], z[t..])` for every split `t` of a range, in linear time per level.
//!
//! For one word length with `Nu = t - m + 1` left and `Nv = n - m - t + 1`
//! right windows, the level term is `sum_B |a_B Nv - b_B Nu| / (Nu Nv)`.
//! Words are kept in two classes by the sign of `f_B = a_B Nv - b_B Nu`, so
//! the sum is `Nv (Pa - Na) - Nu (Pb - Nb)` from per-class count totals.
//! Moving the split by one changes one left count and one right count, and
//! decreases every other `f_B`; a positive word therefore turns negative at a
//! time known in advance, which is queued as an event.

use rayon::prelude::*;

use crate::distance::{self_separation_level, weight, weight_sum, Truncation};
use crate::error::Result;
use crate::index::SegmentedIndex;
use crate::quantize::rank_levels;
use crate::sample::Sample;

/// One `(m, l)` level: its weight and the id of the word starting at each
/// position.
pub(crate) struct Level {
    pub m: usize,
    pub l: u32,
    pub weight: f64,
    pub ids: Vec<u32>,
    pub distinct: usize,
}

/// Builds the levels of `t` for `z`, in the order `d̂` sums them.
pub(crate) fn levels(z: &Sample, t: &Truncation) -> Result<Vec<Level>> {
    t.check_for(z.values().is_some())?;
    let m_max = t.max_len();
    let mut out = match z {
        Sample::Discrete { size, symbols } => {
            let idx = SegmentedIndex::new(&[symbols], *size);
            (1..=m_max)
                .into_par_iter()
                .map(|m| {
                    let (mut ids, distinct) = idx.kgram_ids(m);
                    Level { m, l: 0, weight: weight(m as u64), ids: ids.pop().unwrap(), distinct }
                })
                .collect::<Vec<_>>()
        }
        Sample::Real(v) => {
            let cap = t.level_cap();
            let star = self_separation_level(v);
            let last = cap.map_or(star, |c| c.min(star));
            (1..=last)
                .into_par_iter()
                .flat_map_iter(|l| {
                    let (ranked, count) = rank_levels(&[v], l);
                    let idx = SegmentedIndex::new(&[&ranked[0]], count);
                    let wl = if l == last {
                        weight_sum(l as u64, cap.map(u64::from))
                    } else {
                        weight(l as u64)
                    };
                    (1..=m_max)
                        .map(|m| {
                            let (mut ids, distinct) = idx.kgram_ids(m);
                            Level {
                                m,
                                l,
                                weight: weight(m as u64) * wl,
                                ids: ids.pop().unwrap(),
                                distinct,
                            }
                        })
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        }
    };
    out.sort_by_key(|lv| (lv.m, lv.l));
    Ok(out)
}

/// Level terms for every split `t` in `lo..=hi` of a length-`n` sequence.
pub(crate) fn scan_level(level: &Level, n: usize, lo: usize, hi: usize) -> Vec<f64> {
    let m = level.m;
    let nu = |t: usize| t as i64 - m as i64 + 1;
    let nv = |t: usize| n as i64 - m as i64 - t as i64 + 1;
    let mut out: Vec<f64> = (lo..=hi)
        .map(|t| match (nu(t) > 0, nv(t) > 0) {
            (true, true) => f64::NAN,
            (false, false) => 0.0,
            _ => 1.0,
        })
        .collect();
    let (a_lo, a_hi) = (lo.max(m), hi.min(n.saturating_sub(m)));
    if a_lo > a_hi {
        return out;
    }
    let mut engine = Engine::new(level, n, a_lo, a_hi);
    out[a_lo - lo] = engine.term();
    for t in a_lo + 1..=a_hi {
        engine.advance(t);
        out[t - lo] = engine.term();
    }
    out
}

struct Engine<'a> {
    ids: &'a [u32],
    n: usize,
    m: usize,
    start: usize,
    end: usize,
    t: usize,
    a: Vec<i64>,
    b: Vec<i64>,
    pos: Vec<bool>,
    version: Vec<u32>,
    sums: [i64; 4], // Pa, Pb, Na, Nb
    events: Vec<Vec<(u32, u32)>>,
}

impl<'a> Engine<'a> {
    fn new(level: &'a Level, n: usize, start: usize, end: usize) -> Self {
        let m = level.m;
        let d = level.distinct;
        let mut e = Engine {
            ids: &level.ids,
            n,
            m,
            start,
            end,
            t: start,
            a: vec![0; d],
            b: vec![0; d],
            pos: vec![false; d],
            version: vec![0; d],
            sums: [0; 4],
            events: vec![Vec::new(); end - start + 1],
        };
        for &id in &level.ids[..=start - m] {
            e.a[id as usize] += 1;
        }
        for &id in &level.ids[start..] {
            e.b[id as usize] += 1;
        }
        for w in 0..d {
            e.insert(w);
        }
        e
    }

    fn nu(&self) -> i64 {
        (self.t + 1 - self.m) as i64
    }

    fn nv(&self) -> i64 {
        (self.n + 1 - self.m - self.t) as i64
    }

    fn insert(&mut self, w: usize) {
        let (a, b) = (self.a[w], self.b[w]);
        if a == 0 && b == 0 {
            self.pos[w] = false;
            return;
        }
        if a * self.nv() - b * self.nu() > 0 {
            self.pos[w] = true;
            self.sums[0] += a;
            self.sums[1] += b;
            // first split with a (n - m - t + 1) < b (t - m + 1)
            let span = (self.n + 1 - self.m) as i64;
            let flip = ((a * span + b * (self.m as i64 - 1)) / (a + b) + 1) as usize;
            if flip <= self.end {
                self.events[flip - self.start].push((w as u32, self.version[w]));
            }
        } else {
            self.pos[w] = false;
            self.sums[2] += a;
            self.sums[3] += b;
        }
    }

    fn remove(&mut self, w: usize) {
        let (a, b) = (self.a[w], self.b[w]);
        if self.pos[w] {
            self.sums[0] -= a;
            self.sums[1] -= b;
        } else {
            self.sums[2] -= a;
            self.sums[3] -= b;
        }
        self.version[w] = self.version[w].wrapping_add(1);
    }

    fn advance(&mut self, t: usize) {
        debug_assert_eq!(t, self.t + 1);
        let enter = self.ids[t - self.m] as usize;
        let leave = self.ids[t - 1] as usize;
        self.remove(enter);
        if leave != enter {
            self.remove(leave);
        }
        self.t = t;
        self.a[enter] += 1;
        self.b[leave] -= 1;
        self.insert(enter);
        if leave != enter {
            self.insert(leave);
        }
        let due = std::mem::take(&mut self.events[t - self.start]);
        for (w, ver) in due {
            let w = w as usize;
            if self.version[w] == ver && self.pos[w] {
                self.pos[w] = false;
                self.sums[0] -= self.a[w];
                self.sums[1] -= self.b[w];
                self.sums[2] += self.a[w];
                self.sums[3] += self.b[w];
            }
        }
    }

    fn term(&self) -> f64 {
        let [pa, pb, na, nb] = self.sums;
        let (nu, nv) = (self.nu(), self.nv());
        let s = nv as i128 * (pa - na) as i128 - nu as i128 * (pb - nb) as i128;
        debug_assert!(s >= 0);
        s as f64 / (nu as f64 * nv as f64)
    }
}

/// `d̂(z[..t], z[t..])` for every `t` in `lo..=hi` (`1 <= lo <= hi < n`).
pub(crate) fn split_scores(z: &Sample, t: &Truncation, lo: usize, hi: usize) -> Result<Vec<f64>> {
    let n = z.len();
    debug_assert!(1 <= lo && lo <= hi && hi < n);
    let levels = levels(z, t)?;
    let terms: Vec<Vec<f64>> = levels.par_iter().map(|lv| scan_level(lv, n, lo, hi)).collect();
    let mut total = vec![0.0; hi - lo + 1];
    for (lv, row) in levels.iter().zip(&terms) {
        for (acc, &x) in total.iter_mut().zip(row) {
            *acc += lv.weight * x;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::distance::distance;

    fn check(z: &Sample, t: &Truncation, exact: bool) -> std::result::Result<(), TestCaseError> {
        let n = z.len();
        let scores = split_scores(z, t, 1, n - 1).unwrap();
        for s in 1..n {
            let d = distance(&z.slice(0, s).unwrap(), &z.slice(s, n).unwrap(), t).unwrap().value;
            if exact {
                prop_assert_eq!(scores[s - 1], d, "split {}", s);
            } else {
                prop_assert!((scores[s - 1] - d).abs() < 1e-12, "split {}: {} vs {}", s, scores[s - 1], d);
            }
        }
        Ok(())
    }

    #[test]
    fn hard_blocks() {
        let mut v = vec![0u32; 50];
        v.extend(vec![1u32; 50]);
        let z = Sample::discrete(2, v).unwrap();
        let s = split_scores(&z, &Truncation::words(1), 1, 99).unwrap();
        assert_eq!(s[49], 1.0);
        check(&z, &Truncation::words(5), true).unwrap();
    }

    proptest! {
        #[test]
        fn discrete_matches_direct_distance(
            v in prop::collection::vec(0u32..3, 2..70),
            k in 1usize..7,
        ) {
            check(&Sample::discrete(3, v).unwrap(), &Truncation::words(k), true)?;
        }

        #[test]
        fn low_entropy_sequences(v in prop::collection::vec(prop_oneof![9 => Just(0u32), 1 => Just(1u32)], 2..90), k in 1usize..9) {
            check(&Sample::discrete(2, v).unwrap(), &Truncation::words(k), true)?;
        }

        #[test]
        fn real_matches_direct_distance(
            v in prop::collection::vec(prop_oneof![(-2.0f64..2.0), (0u8..3).prop_map(f64::from)], 2..30),
            m in 1usize..4,
        ) {
            let z = Sample::real(v).unwrap();
            check(&z, &Truncation::exact_tail(m), false)?;
            check(&z, &Truncation::cells(m, 5), false)?;
        }
    }
}
