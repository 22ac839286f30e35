//! Random initial graphs.

use rand::seq::{index, SliceRandom};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Opinion, VoterGraph};
use crate::rng::RandomStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EdgeMode {
    /// Exactly `m` distinct unordered pairs, drawn without replacement.
    FixedCount(usize),
    /// Every unordered pair linked independently with this probability.
    PerPair(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitSpec {
    pub n_agents: usize,
    /// Fraction of agents starting with opinion `Zero`.
    pub u: f64,
    pub edge_mode: EdgeMode,
}

impl InitSpec {
    /// 100 agents, 400 links, even split.
    pub fn standard() -> Self {
        InitSpec {
            n_agents: 100,
            u: 0.5,
            edge_mode: EdgeMode::FixedCount(400),
        }
    }

    /// Number of agents that start with `Zero`: `round(u · n)`.
    pub fn zero_count(&self) -> usize {
        (self.u * self.n_agents as f64).round() as usize
    }

    pub fn pair_count(&self) -> usize {
        self.n_agents * self.n_agents.saturating_sub(1) / 2
    }

    pub fn validate(&self) -> Result<(), InitError> {
        if self.n_agents == 0 {
            return Err(InitError::NoAgents);
        }
        if !(0.0..=1.0).contains(&self.u) {
            return Err(InitError::Fraction(self.u));
        }
        match self.edge_mode {
            EdgeMode::FixedCount(m) if m > self.pair_count() => Err(InitError::TooManyEdges {
                requested: m,
                available: self.pair_count(),
            }),
            EdgeMode::PerPair(v) if !(0.0..=1.0).contains(&v) => Err(InitError::PairProbability(v)),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InitError {
    #[error("at least one agent is required")]
    NoAgents,
    #[error("opinion fraction u must lie in [0, 1], got {0}")]
    Fraction(f64),
    #[error("pair probability must lie in [0, 1], got {0}")]
    PairProbability(f64),
    #[error("{requested} edges requested but only {available} distinct pairs exist")]
    TooManyEdges { requested: usize, available: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Unordered pair with rank `k` in the row-major listing of `i < j`.
fn unrank_pair(mut k: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
        i += 1;
    }
}

/// Builds an initial graph: exactly `round(u · n)` uniformly chosen agents
/// hold `Zero`, the rest `One`; edges follow `spec.edge_mode`.
pub fn generate(spec: &InitSpec, rng: &mut RandomStream) -> Result<VoterGraph, InitError> {
    spec.validate()?;
    let n = spec.n_agents;
    let mut order: Vec<usize> = (0..n).collect();
    let (zeros, _) = order.partial_shuffle(rng, spec.zero_count());
    let mut opinions = vec![Opinion::One; n];
    for &a in zeros.iter() {
        opinions[a] = Opinion::Zero;
    }

    let edges: Vec<(usize, usize)> = match spec.edge_mode {
        EdgeMode::FixedCount(m) => {
            let mut ranks = index::sample(rng, spec.pair_count(), m).into_vec();
            ranks.sort_unstable();
            ranks.into_iter().map(|k| unrank_pair(k, n)).collect()
        }
        EdgeMode::PerPair(v) => {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.bernoulli(v) {
                        edges.push((i, j));
                    }
                }
            }
            edges
        }
    };
    Ok(VoterGraph::new(opinions, &edges)?)
}
