//! Exact word probabilities of finite-state stationary models.
//!
//! Every marginal-computable model compiles to a hidden-state machine: an
//! initial law over states, a sparse transition kernel, and per-state emission
//! probabilities. The probability of a word is the forward-algorithm sum over
//! hidden paths.

#[derive(Debug, Clone)]
pub(crate) struct ForwardMachine {
    pub init: Vec<f64>,
    pub trans: Vec<Vec<(u32, f64)>>,
    /// `emit[a][s]`: probability that state `s` emits symbol `a`.
    pub emit: Vec<Vec<f64>>,
}

impl ForwardMachine {
    pub fn states(&self) -> usize {
        self.init.len()
    }

    pub fn start(&self, a: u32) -> Vec<f64> {
        let e = &self.emit[a as usize];
        self.init.iter().zip(e).map(|(p, q)| p * q).collect()
    }

    pub fn step(&self, alpha: &[f64], a: u32) -> Vec<f64> {
        let mut next = vec![0.0; self.states()];
        for (s, &mass) in alpha.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(t, p) in &self.trans[s] {
                next[t as usize] += mass * p;
            }
        }
        let e = &self.emit[a as usize];
        next.iter_mut().zip(e).for_each(|(v, q)| *v *= q);
        next
    }

    pub fn prob(&self, word: &[u32]) -> f64 {
        let Some((&first, rest)) = word.split_first() else {
            return 1.0;
        };
        let mut alpha = self.start(first);
        for &a in rest {
            alpha = self.step(&alpha, a);
        }
        alpha.iter().sum()
    }
}

/// Word probabilities for a stream of words in lexicographic order, reusing
/// the forward vectors of the shared prefix with the previous word.
pub(crate) struct PrefixProbs<'a> {
    machine: &'a ForwardMachine,
    word: Vec<u32>,
    alphas: Vec<Vec<f64>>,
}

impl<'a> PrefixProbs<'a> {
    pub fn new(machine: &'a ForwardMachine) -> Self {
        PrefixProbs { machine, word: Vec::new(), alphas: Vec::new() }
    }

    pub fn prob(&mut self, word: &[u32]) -> f64 {
        let keep = self
            .word
            .iter()
            .zip(word)
            .take_while(|(a, b)| a == b)
            .count();
        self.word.truncate(keep);
        self.alphas.truncate(keep);
        for &a in &word[keep..] {
            let next = match self.alphas.last() {
                None => self.machine.start(a),
                Some(prev) => self.machine.step(prev, a),
            };
            self.alphas.push(next);
            self.word.push(a);
        }
        self.alphas.last().map_or(1.0, |a| a.iter().sum())
    }
}
