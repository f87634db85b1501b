//! Stochastic information propagation: every informed vertex tries to inform
//! each out-neighbour independently with probability `p` per round. Rounds
//! are synchronous, so a vertex informed in round `t` transmits from round
//! `t + 1` on, matching the one-edge-per-generation flow of migration.

use rand::Rng;
use thiserror::Error;

use crate::topology::TopologyGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("source vertex {source_vertex} out of range for {len} vertices")]
    SourceOutOfRange { source_vertex: usize, len: usize },
    #[error("transmission probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationState {
    informed: Vec<bool>,
    count: usize,
    round: u64,
}

impl PropagationState {
    pub fn new(num_vertices: usize, source: usize) -> Result<Self, PropagationError> {
        if source >= num_vertices {
            return Err(PropagationError::SourceOutOfRange { source_vertex: source, len: num_vertices });
        }
        let mut informed = vec![false; num_vertices];
        informed[source] = true;
        Ok(PropagationState { informed, count: 1, round: 0 })
    }

    pub fn is_informed(&self, v: usize) -> bool {
        self.informed[v]
    }

    pub fn informed_count(&self) -> usize {
        self.count
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn informed(&self) -> impl Iterator<Item = usize> + '_ {
        self.informed.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }

    /// Advances one round in place; returns the number of newly informed vertices.
    pub fn advance<R: Rng + ?Sized>(&mut self, g: &TopologyGraph, p: f64, rng: &mut R) -> usize {
        let mut fresh = Vec::new();
        if p > 0.0 {
            let mut marked = vec![false; self.informed.len()];
            for (u, targets) in g.adjacency().iter().enumerate() {
                if !self.informed[u] {
                    continue;
                }
                for &v in targets {
                    if self.informed[v] || marked[v] {
                        continue;
                    }
                    if p >= 1.0 || rng.random::<f64>() < p {
                        marked[v] = true;
                        fresh.push(v);
                    }
                }
            }
        }
        for &v in &fresh {
            self.informed[v] = true;
        }
        self.count += fresh.len();
        self.round += 1;
        fresh.len()
    }
}

/// Functional form of one round.
pub fn propagate_step<R: Rng + ?Sized>(
    state: &PropagationState,
    g: &TopologyGraph,
    p: f64,
    rng: &mut R,
) -> PropagationState {
    let mut next = state.clone();
    next.advance(g, p, rng);
    next
}

/// First rounds at which at least `k` vertices were informed, `k = 1..=μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingTimes {
    times: Vec<Option<u64>>,
}

impl HittingTimes {
    pub fn num_vertices(&self) -> usize {
        self.times.len()
    }

    /// `T(k)`, or `None` if the budget ran out first.
    pub fn get(&self, k: usize) -> Option<u64> {
        assert!(k >= 1 && k <= self.times.len(), "k must lie in 1..=μ");
        self.times[k - 1]
    }

    /// `T(μ)`, the propagation time.
    pub fn propagation_time(&self) -> Option<u64> {
        self.times.last().copied().flatten()
    }

    pub fn is_complete(&self) -> bool {
        self.propagation_time().is_some()
    }

    /// `(k, T(k))` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Option<u64>)> + '_ {
        self.times.iter().enumerate().map(|(i, &t)| (i + 1, t))
    }
}

pub fn run_hitting_times<R: Rng + ?Sized>(
    g: &TopologyGraph,
    p: f64,
    source: usize,
    budget: u64,
    rng: &mut R,
) -> Result<HittingTimes, PropagationError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PropagationError::InvalidProbability(p));
    }
    let mu = g.num_vertices();
    let mut state = PropagationState::new(mu, source)?;
    let mut times = vec![None; mu];
    times[0] = Some(0);
    while state.count < mu && state.round < budget {
        let before = state.count;
        state.advance(g, p, rng);
        for slot in &mut times[before..state.count] {
            *slot = Some(state.round);
        }
    }
    Ok(HittingTimes { times })
}
