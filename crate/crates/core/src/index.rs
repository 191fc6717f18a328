//! Suffix-array backed k-gram counting.
//!
//! The suffix and LCP arrays come from libsais (SA-IS, linear time). All
//! occurrences of one k-gram form a contiguous run of the suffix array in
//! which every adjacent LCP is at least `k`, so the frequencies of every
//! k-gram of a text come out of a single linear pass.
//!
//! Several texts can share one index ([`SegmentedIndex`]); each is followed by
//! a separator symbol that occurs nowhere else, so no common prefix crosses a
//! segment boundary.

use std::collections::BTreeMap;

use libsais::suffix_array::AlphabetSize;
use libsais::SuffixArrayConstruction;

use crate::error::{Error, Result};
use crate::sample::{Frequency, Sample};

/// Suffix array of `text` (positions in lexicographic order of their suffixes).
pub fn suffix_array(text: &[u32]) -> Vec<u32> {
    suffix_and_lcp(text).0
}

/// Suffix array and LCP array of `text`, both from libsais.
pub fn suffix_and_lcp(text: &[u32]) -> (Vec<u32>, Vec<u32>) {
    if text.is_empty() {
        return (Vec::new(), Vec::new());
    }
    assert!(text.len() < i32::MAX as usize, "text too long for a 32-bit suffix array");
    let mut symbols = text.to_vec();
    symbols.sort_unstable();
    symbols.dedup();
    let dense = |s: &u32| symbols.binary_search(s).unwrap();
    let to_u32 = |v: &[i32]| v.iter().map(|&p| p as u32).collect::<Vec<u32>>();
    if symbols.len() <= 256 {
        let bytes: Vec<u8> = text.iter().map(|s| dense(s) as u8).collect();
        let r = SuffixArrayConstruction::for_text(&bytes)
            .in_owned_buffer32()
            .single_threaded()
            .run()
            .and_then(|r| r.plcp_construction().single_threaded().run())
            .and_then(|r| r.lcp_construction().single_threaded().run())
            .expect("suffix array construction");
        (to_u32(r.suffix_array()), to_u32(r.lcp()))
    } else {
        let mut ints: Vec<i32> = text.iter().map(|s| dense(s) as i32).collect();
        let construction = SuffixArrayConstruction::for_text_mut(&mut ints)
            .in_owned_buffer32()
            .single_threaded();
        // SAFETY: every value lies in 0..symbols.len()
        let r = unsafe { construction.with_alphabet_size(AlphabetSize::new(symbols.len() as i32)) }
            .run()
            .and_then(|r| r.plcp_construction().single_threaded().run())
            .and_then(|r| r.lcp_construction().single_threaded().run())
            .expect("suffix array construction");
        (to_u32(r.suffix_array()), to_u32(r.lcp()))
    }
}

/// A suffix array over one or more symbol sequences.
#[derive(Debug, Clone)]
pub struct SegmentedIndex {
    text: Vec<u32>,
    sa: Vec<u32>,
    lcp: Vec<u32>,
    /// Segment of the suffix at each suffix-array slot.
    segment_of: Vec<u32>,
    /// Symbols left in the owning segment for the suffix at each slot.
    remaining: Vec<u32>,
    segment_lens: Vec<usize>,
    segment_starts: Vec<usize>,
}

impl SegmentedIndex {
    /// Indexes `segments`, whose symbols must all be `< alphabet_size`.
    pub fn new(segments: &[&[u32]], alphabet_size: u32) -> Self {
        let total: usize = segments.iter().map(|s| s.len() + 1).sum();
        let mut text = Vec::with_capacity(total);
        let mut segment_starts = Vec::with_capacity(segments.len());
        for (j, seg) in segments.iter().enumerate() {
            segment_starts.push(text.len());
            debug_assert!(seg.iter().all(|&s| s < alphabet_size));
            text.extend_from_slice(seg);
            text.push(alphabet_size + j as u32);
        }
        let (sa, lcp) = suffix_and_lcp(&text);
        // in suffix-array order, so the per-k passes read memory sequentially
        let (segment_of, remaining) = sa
            .iter()
            .map(|&p| {
                let j = segment_starts.partition_point(|&s| s <= p as usize) - 1;
                let end = segment_starts[j] + segments[j].len();
                (j as u32, (end - p as usize) as u32)
            })
            .unzip();
        SegmentedIndex {
            text,
            sa,
            lcp,
            segment_of,
            remaining,
            segment_lens: segments.iter().map(|s| s.len()).collect(),
            segment_starts,
        }
    }

    pub fn segment_count(&self) -> usize {
        self.segment_lens.len()
    }

    pub fn segment_len(&self, j: usize) -> usize {
        self.segment_lens[j]
    }

    /// Number of length-`k` windows of segment `j`.
    pub fn windows(&self, j: usize, k: usize) -> u64 {
        (self.segment_lens[j] + 1).saturating_sub(k) as u64
    }

    /// Calls `f(word, counts)` for every length-`k` word occurring in at least
    /// one segment, in lexicographic order; `counts[j]` is the number of
    /// occurrences in segment `j`.
    pub fn for_each_kgram<F: FnMut(&[u32], &[u64])>(&self, k: usize, mut f: F) {
        assert!(k >= 1, "k-grams need k >= 1");
        let mut counts = vec![0u64; self.segment_count()];
        let mut rep: Option<usize> = None;
        for (i, &p) in self.sa.iter().enumerate() {
            let p = p as usize;
            if i == 0 || (self.lcp[i] as usize) < k {
                if let Some(r) = rep.take() {
                    f(&self.text[r..r + k], &counts);
                    counts.iter_mut().for_each(|c| *c = 0);
                }
            }
            if self.remaining[i] as usize >= k {
                counts[self.segment_of[i] as usize] += 1;
                rep.get_or_insert(p);
            }
        }
        if let Some(r) = rep {
            f(&self.text[r..r + k], &counts);
        }
    }

    /// Dense ids of the length-`k` words: `ids[j][p]` is the id of the word
    /// starting at offset `p` of segment `j`, for `p` in `0..=len_j - k`.
    /// Returns the ids and the number of distinct words.
    pub fn kgram_ids(&self, k: usize) -> (Vec<Vec<u32>>, usize) {
        assert!(k >= 1, "k-grams need k >= 1");
        let mut ids: Vec<Vec<u32>> = self
            .segment_lens
            .iter()
            .map(|&len| vec![u32::MAX; (len + 1).saturating_sub(k)])
            .collect();
        let mut next = 0u32;
        let mut open = false;
        for (i, &p) in self.sa.iter().enumerate() {
            let p = p as usize;
            if (i == 0 || (self.lcp[i] as usize) < k) && open {
                next += 1;
                open = false;
            }
            if self.remaining[i] as usize >= k {
                let j = self.segment_of[i] as usize;
                ids[j][p - self.segment_starts[j]] = next;
                open = true;
            }
        }
        let distinct = next as usize + usize::from(open);
        (ids, distinct)
    }
}

/// Occurrence counts of arbitrary words in one discrete sample.
#[derive(Debug, Clone)]
pub struct KGramIndex {
    alphabet_size: u32,
    inner: SegmentedIndex,
}

impl KGramIndex {
    pub fn build(x: &Sample) -> Result<Self> {
        match x {
            Sample::Discrete { size, symbols } => Ok(Self::from_symbols(symbols, *size)),
            Sample::Real(_) => Err(Error::AlphabetMismatch(
                "k-gram index needs a discrete sample".into(),
            )),
        }
    }

    pub(crate) fn from_symbols(symbols: &[u32], alphabet_size: u32) -> Self {
        KGramIndex {
            alphabet_size,
            inner: SegmentedIndex::new(&[symbols], alphabet_size),
        }
    }

    /// Length of the indexed sample.
    pub fn len(&self) -> usize {
        self.inner.segment_len(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    /// Number of occurrences of `word` (overlapping occurrences included).
    pub fn count(&self, word: &[u32]) -> u64 {
        let k = word.len();
        if k == 0 || k > self.len() {
            return 0;
        }
        let text = &self.inner.text;
        let prefix = |p: u32| {
            let p = p as usize;
            &text[p..(p + k).min(text.len())]
        };
        let lo = self.inner.sa.partition_point(|&p| prefix(p) < word);
        let hi = self.inner.sa.partition_point(|&p| prefix(p) <= word);
        (hi - lo) as u64
    }

    pub fn frequency(&self, word: &[u32]) -> Result<Frequency> {
        if word.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(Frequency {
            count: self.count(word),
            windows: self.inner.windows(0, word.len()),
        })
    }

    /// Frequencies of every length-`k` word that occurs in the sample.
    pub fn kgram_frequencies(&self, k: usize) -> Result<BTreeMap<Vec<u32>, Frequency>> {
        if k == 0 {
            return Err(Error::EmptyPattern);
        }
        let windows = self.inner.windows(0, k);
        let mut out = BTreeMap::new();
        if k <= self.len() {
            self.inner.for_each_kgram(k, |w, c| {
                out.insert(w.to_vec(), Frequency { count: c[0], windows });
            });
        }
        Ok(out)
    }

    /// Occurrence counts of the length-`k` words, without materializing them.
    pub fn for_each_kgram<F: FnMut(&[u32], u64)>(&self, k: usize, mut f: F) {
        if k >= 1 && k <= self.len() {
            self.inner.for_each_kgram(k, |w, c| f(w, c[0]));
        }
    }
}
