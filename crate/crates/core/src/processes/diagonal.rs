//! The switch/reset chain over the diagonal.
//!
//! States are the ordinary states `0..=k_0`, `k_{2j+1}+1..=k_{2j+2}` and, for
//! every pair `(k_{2j}, k_{2j+1})` of levels, two parallel branches
//! `u_i`, `d_i` for `k_{2j} < i <= k_{2j+1}`. Leaving `k_{2j}` passes the
//! switch `S_{2j}`, which routes to `u` or `d` according to its value; leaving
//! the end of a branch passes the reset `R_{2j}`, which re-draws the switch
//! fairly. Switches and resets take no time and emit nothing. From every
//! other state the chain returns to `0` with probability `delta` and advances
//! otherwise. The output is `0` on `u` states and `1` everywhere else.
//!
//! Only the given prefix of levels is built: past the last level the chain
//! consists of plain ordinary states.

use serde::{Deserialize, Serialize};

use super::rng::{coin, rng_from_seed, SimRng};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryStart {
    /// `P(i) = delta (1 - delta)^i`, split evenly between `u_i` and `d_i`.
    #[default]
    Stationary,
    /// Start in state 0.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalAdversary {
    pub delta: f64,
    pub levels: Vec<u64>,
    #[serde(default)]
    pub start: AdversaryStart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryState {
    Ordinary(u64),
    Up(u64),
    Down(u64),
}

impl AdversaryState {
    pub fn index(&self) -> u64 {
        match *self {
            AdversaryState::Ordinary(i) | AdversaryState::Up(i) | AdversaryState::Down(i) => i,
        }
    }

    pub fn output(&self) -> u32 {
        match self {
            AdversaryState::Up(_) => 0,
            _ => 1,
        }
    }
}

/// One pass through a switch: at `time` the chain entered the branch chosen
/// by switch `switch` (0 for `S_0`, 1 for `S_2`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchPassage {
    pub time: usize,
    pub switch: usize,
    pub up: bool,
}

#[derive(Debug, Clone)]
pub struct AdversaryTrajectory {
    pub symbols: Vec<u32>,
    pub states: Vec<AdversaryState>,
    pub passages: Vec<SwitchPassage>,
    /// Transitions into state 0 (including 0 -> 0).
    pub returns_to_zero: usize,
}

impl DiagonalAdversary {
    pub fn new(delta: f64, levels: Vec<u64>) -> Result<Self> {
        let d = DiagonalAdversary { delta, levels, start: AdversaryStart::Stationary };
        d.validate()?;
        Ok(d)
    }

    pub fn with_start(mut self, start: AdversaryStart) -> Self {
        self.start = start;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidModel(format!(
                "diagonal.delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.levels.first() == Some(&0) {
            return Err(Error::InvalidModel("diagonal.levels must be positive".into()));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidModel(
                "diagonal.levels must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// `(k_{2j}, k_{2j+1})` for every complete pair of levels.
    fn branches(&self) -> Vec<(u64, u64)> {
        self.levels.chunks_exact(2).map(|c| (c[0], c[1])).collect()
    }

    pub fn simulate(&self, n: usize, seed: u64) -> AdversaryTrajectory {
        let branches = self.branches();
        let mut rng = rng_from_seed(seed);
        let mut switches: Vec<bool> = branches.iter().map(|_| coin(&mut rng, 0.5)).collect();
        let mut state = self.initial_state(&branches, &mut rng);

        let mut traj = AdversaryTrajectory {
            symbols: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            passages: Vec::new(),
            returns_to_zero: 0,
        };
        for t in 0..n {
            traj.symbols.push(state.output());
            traj.states.push(state);
            if t + 1 == n {
                break;
            }
            if coin(&mut rng, self.delta) {
                state = AdversaryState::Ordinary(0);
                traj.returns_to_zero += 1;
                continue;
            }
            state = match state {
                AdversaryState::Ordinary(i) => match branches.iter().position(|b| b.0 == i) {
                    Some(j) => {
                        traj.passages.push(SwitchPassage { time: t + 1, switch: j, up: switches[j] });
                        if switches[j] {
                            AdversaryState::Up(i + 1)
                        } else {
                            AdversaryState::Down(i + 1)
                        }
                    }
                    None => AdversaryState::Ordinary(i + 1),
                },
                AdversaryState::Up(i) | AdversaryState::Down(i) => {
                    match branches.iter().position(|b| b.1 == i) {
                        Some(j) => {
                            switches[j] = coin(&mut rng, 0.5);
                            AdversaryState::Ordinary(i + 1)
                        }
                        None if matches!(state, AdversaryState::Up(_)) => AdversaryState::Up(i + 1),
                        None => AdversaryState::Down(i + 1),
                    }
                }
            };
        }
        traj
    }

    fn initial_state(&self, branches: &[(u64, u64)], rng: &mut SimRng) -> AdversaryState {
        let i = match self.start {
            AdversaryStart::Zero => return AdversaryState::Ordinary(0),
            AdversaryStart::Stationary => {
                let mut i = 0u64;
                while !coin(rng, self.delta) {
                    i += 1;
                }
                i
            }
        };
        if branches.iter().any(|&(lo, hi)| lo < i && i <= hi) {
            if coin(rng, 0.5) {
                AdversaryState::Up(i)
            } else {
                AdversaryState::Down(i)
            }
        } else {
            AdversaryState::Ordinary(i)
        }
    }

    pub(crate) fn sample(&self, n: usize, seed: u64) -> Vec<u32> {
        self.simulate(n, seed).symbols
    }
}
