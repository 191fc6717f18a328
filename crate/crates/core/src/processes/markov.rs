//! Finite-order Markov chains and the stationary-distribution solver.

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::forward::ForwardMachine;
use super::rng::{cumulative, draw, rng_from_seed};
use super::check_distribution;
use crate::error::{Error, Result};

/// Initial law of a chain: its stationary law, or an explicit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InitRepr", into = "InitRepr")]
#[derive(Default)]
pub enum Init {
    #[default]
    Stationary,
    Explicit(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum InitRepr {
    Name(String),
    Vector(Vec<f64>),
}

impl TryFrom<InitRepr> for Init {
    type Error = String;

    fn try_from(r: InitRepr) -> std::result::Result<Self, String> {
        match r {
            InitRepr::Name(s) if s == "stationary" => Ok(Init::Stationary),
            InitRepr::Name(s) => Err(format!(
                "init must be \"stationary\" or a probability vector, got {s:?}"
            )),
            InitRepr::Vector(v) => Ok(Init::Explicit(v)),
        }
    }
}

impl From<Init> for InitRepr {
    fn from(i: Init) -> Self {
        match i {
            Init::Stationary => InitRepr::Name("stationary".into()),
            Init::Explicit(v) => InitRepr::Vector(v),
        }
    }
}


/// An order-`k` Markov chain over `0..alphabet`.
///
/// Row `c` of `transitions` is the next-symbol law after the context
/// `c = s_1 A^(k-1) + ... + s_k` (oldest symbol most significant). Internally
/// the chain runs as an order-1 chain on the `A^k` contexts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Markov {
    #[serde(default = "one")]
    pub order: usize,
    pub transitions: Vec<Vec<f64>>,
    #[serde(default)]
    pub init: Init,
}

fn one() -> usize {
    1
}

impl Markov {
    pub fn new(order: usize, transitions: Vec<Vec<f64>>, init: Init) -> Result<Self> {
        let m = Markov { order, transitions, init };
        m.validate()?;
        Ok(m)
    }

    /// Binary chain with `P(0 -> 1) = p` and `P(1 -> 0) = q`.
    pub fn two_state(p: f64, q: f64) -> Result<Self> {
        Markov::new(1, vec![vec![1.0 - p, p], vec![q, 1.0 - q]], Init::Stationary)
    }

    /// Symmetric binary chain that flips state with probability `eps`.
    pub fn symmetric_flip(eps: f64) -> Result<Self> {
        Markov::two_state(eps, eps)
    }

    pub fn alphabet(&self) -> u32 {
        self.transitions.first().map_or(0, |r| r.len() as u32)
    }

    pub fn contexts(&self) -> usize {
        (self.alphabet() as usize).pow(self.order as u32)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidModel("markov.order must be >= 1".into()));
        }
        let a = self.alphabet();
        if a < 2 {
            return Err(Error::InvalidModel(
                "markov.transitions rows must have >= 2 entries".into(),
            ));
        }
        let contexts = (a as u128).checked_pow(self.order as u32).unwrap_or(u128::MAX);
        if contexts > 1 << 16 {
            return Err(Error::InvalidModel(format!(
                "markov chain with {a}^{} contexts is too large",
                self.order
            )));
        }
        if self.transitions.len() as u128 != contexts {
            return Err(Error::InvalidModel(format!(
                "markov.transitions needs {contexts} rows (alphabet^order), got {}",
                self.transitions.len()
            )));
        }
        for (i, row) in self.transitions.iter().enumerate() {
            if row.len() != a as usize {
                return Err(Error::InvalidModel(format!(
                    "markov.transitions[{i}] has {} entries, expected {a}",
                    row.len()
                )));
            }
            check_distribution(row, &format!("markov.transitions[{i}]"))?;
        }
        if let Init::Explicit(v) = &self.init {
            if v.len() != self.contexts() {
                return Err(Error::InvalidModel(format!(
                    "markov.init needs {} entries (alphabet^order), got {}",
                    self.contexts(),
                    v.len()
                )));
            }
            check_distribution(v, "markov.init")?;
        }
        Ok(())
    }

    /// Transition matrix of the order-1 chain on contexts.
    pub fn context_matrix(&self) -> Vec<Vec<f64>> {
        let c = self.contexts();
        let a = self.alphabet() as usize;
        let mut p = vec![vec![0.0; c]; c];
        for (ctx, row) in self.transitions.iter().enumerate() {
            for (s, &q) in row.iter().enumerate() {
                p[ctx][(ctx * a + s) % c] += q;
            }
        }
        p
    }

    fn context_law(&self) -> Result<Vec<f64>> {
        match &self.init {
            Init::Stationary => stationary_init(self),
            Init::Explicit(v) => Ok(v.clone()),
        }
    }

    pub(crate) fn forward_machine(&self) -> Result<ForwardMachine> {
        if !matches!(self.init, Init::Stationary) {
            return Err(Error::UnsupportedModel(
                "marginal probabilities need a stationary initial law (init = \"stationary\")"
                    .into(),
            ));
        }
        let a = self.alphabet() as usize;
        let c = self.contexts();
        let init = stationary_init(self)?;
        let trans = self
            .transitions
            .iter()
            .enumerate()
            .map(|(ctx, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &q)| q > 0.0)
                    .map(|(s, &q)| (((ctx * a + s) % c) as u32, q))
                    .collect()
            })
            .collect();
        let emit = (0..a)
            .map(|s| (0..c).map(|ctx| if ctx % a == s { 1.0 } else { 0.0 }).collect())
            .collect();
        Ok(ForwardMachine { init, trans, emit })
    }

    pub(crate) fn sample(&self, n: usize, seed: u64) -> Result<Vec<u32>> {
        let a = self.alphabet() as usize;
        let c = self.contexts();
        let mut rng = rng_from_seed(seed);
        let init_cdf = cumulative(&self.context_law()?);
        let rows: Vec<Vec<f64>> = self.transitions.iter().map(|r| cumulative(r)).collect();

        let mut ctx = draw(&mut rng, &init_cdf);
        let mut out = Vec::with_capacity(n);
        // the initial context spells the first `order` symbols, oldest first
        for i in (0..self.order).rev() {
            if out.len() == n {
                break;
            }
            out.push(((ctx / a.pow(i as u32)) % a) as u32);
        }
        while out.len() < n {
            let s = draw(&mut rng, &rows[ctx]);
            out.push(s as u32);
            ctx = (ctx * a + s) % c;
        }
        Ok(out)
    }
}

/// Stationary law over the `A^k` contexts of a Markov chain.
pub fn stationary_init(m: &Markov) -> Result<Vec<f64>> {
    m.validate()?;
    stationary_distribution(&m.context_matrix())
}

/// The unique stationary law `pi = pi P` of a row-stochastic matrix.
///
/// Transient states get mass 0. Fails unless there is exactly one closed
/// communicating class, and that class is aperiodic.
pub fn stationary_distribution(p: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = p.len();
    if n == 0 || p.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidModel("transition matrix must be square and non-empty".into()));
    }
    let mut g = DiGraph::<(), ()>::with_capacity(n, n * 2);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (i, row) in p.iter().enumerate() {
        for (j, &q) in row.iter().enumerate() {
            if q > 0.0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let sccs = tarjan_scc(&g);
    let mut comp = vec![0usize; n];
    for (c, members) in sccs.iter().enumerate() {
        for v in members {
            comp[v.index()] = c;
        }
    }
    let closed: Vec<usize> = (0..sccs.len())
        .filter(|&c| {
            sccs[c].iter().all(|v| {
                p[v.index()]
                    .iter()
                    .enumerate()
                    .all(|(j, &q)| q == 0.0 || comp[j] == c)
            })
        })
        .collect();
    if closed.len() != 1 {
        return Err(Error::NoUniqueStationary(format!(
            "chain is reducible with {} closed communicating classes",
            closed.len()
        )));
    }
    let class: Vec<usize> = {
        let mut v: Vec<usize> = sccs[closed[0]].iter().map(|v| v.index()).collect();
        v.sort_unstable();
        v
    };

    let period = class_period(p, &class);
    if period > 1 {
        return Err(Error::NoUniqueStationary(format!(
            "recurrent class is periodic with period {period}"
        )));
    }

    // Solve pi (P - I) = 0 on the class with one equation replaced by sum(pi) = 1.
    let c = class.len();
    let mut a = DMatrix::<f64>::zeros(c, c);
    for (r, &j) in class.iter().enumerate() {
        for (col, &i) in class.iter().enumerate() {
            a[(r, col)] = p[i][j] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for col in 0..c {
        a[(c - 1, col)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(c);
    b[c - 1] = 1.0;
    let sol = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::NoUniqueStationary("singular stationary system".into()))?;

    let mut pi = vec![0.0; n];
    for (r, &i) in class.iter().enumerate() {
        pi[i] = sol[r].max(0.0);
    }
    normalize(&mut pi);

    // A few power steps clean up rounding in ill-conditioned solves.
    for _ in 0..64 {
        if residual(p, &pi) <= 1e-13 {
            break;
        }
        pi = step(p, &pi);
        normalize(&mut pi);
    }
    Ok(pi)
}

fn class_period(p: &[Vec<f64>], class: &[usize]) -> usize {
    let n = p.len();
    let mut in_class = vec![false; n];
    class.iter().for_each(|&i| in_class[i] = true);
    let mut dist = vec![usize::MAX; n];
    dist[class[0]] = 0;
    let mut queue = std::collections::VecDeque::from([class[0]]);
    let mut g = 0usize;
    while let Some(u) = queue.pop_front() {
        for (v, &q) in p[u].iter().enumerate() {
            if q == 0.0 || !in_class[v] {
                continue;
            }
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            } else {
                g = gcd(g, (dist[u] + 1).abs_diff(dist[v]));
            }
        }
    }
    g.max(1)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
}

fn step(p: &[Vec<f64>], pi: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; pi.len()];
    for (i, &m) in pi.iter().enumerate() {
        for (j, &q) in p[i].iter().enumerate() {
            out[j] += m * q;
        }
    }
    out
}

/// `max_j |(pi P)_j - pi_j|`.
pub fn residual(p: &[Vec<f64>], pi: &[f64]) -> f64 {
    step(p, pi)
        .iter()
        .zip(pi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_state_closed_form() {
        for &(p, q) in &[(0.2, 0.6), (0.6, 0.2), (0.01, 0.9), (0.5, 0.5)] {
            let m = Markov::two_state(p, q).unwrap();
            let pi = stationary_init(&m).unwrap();
            assert!((pi[0] - q / (p + q)).abs() < 1e-14);
            assert!((pi[1] - p / (p + q)).abs() < 1e-14);
        }
    }

    #[test]
    fn doubly_stochastic_is_uniform() {
        let p = vec![
            vec![0.1, 0.6, 0.3],
            vec![0.5, 0.2, 0.3],
            vec![0.4, 0.2, 0.4],
        ];
        let pi = stationary_distribution(&p).unwrap();
        for x in pi {
            assert!((x - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn reducible_and_periodic_chains_are_rejected() {
        let reducible = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(matches!(
            stationary_distribution(&reducible),
            Err(Error::NoUniqueStationary(_))
        ));
        let periodic = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(matches!(
            stationary_distribution(&periodic),
            Err(Error::NoUniqueStationary(_))
        ));
    }

    #[test]
    fn transient_states_get_no_mass() {
        // state 0 leaks into the closed class {1, 2}
        let p = vec![
            vec![0.5, 0.5, 0.0],
            vec![0.0, 0.3, 0.7],
            vec![0.0, 0.6, 0.4],
        ];
        let pi = stationary_distribution(&p).unwrap();
        assert_eq!(pi[0], 0.0);
        assert!(residual(&p, &pi) < 1e-12);
    }

    #[test]
    fn second_order_contexts() {
        let m = Markov::new(
            2,
            vec![
                vec![0.9, 0.1],
                vec![0.4, 0.6],
                vec![0.3, 0.7],
                vec![0.2, 0.8],
            ],
            Init::Stationary,
        )
        .unwrap();
        let pi = stationary_init(&m).unwrap();
        assert_eq!(pi.len(), 4);
        assert!(residual(&m.context_matrix(), &pi) < 1e-12);
    }

    #[test]
    fn init_serde_forms() {
        let i: Init = serde_json::from_str("\"stationary\"").unwrap();
        assert_eq!(i, Init::Stationary);
        let i: Init = serde_json::from_str("[0.5, 0.5]").unwrap();
        assert_eq!(i, Init::Explicit(vec![0.5, 0.5]));
        assert!(serde_json::from_str::<Init>("\"uniform\"").is_err());
    }
}
