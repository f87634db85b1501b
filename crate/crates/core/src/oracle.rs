//! Exact expected parallel running times for tiny instances.
//!
//! The joint state is the tuple of per-island local states plus the current
//! generation modulo `τ`. A local state is either the island's bit string or,
//! for OneMax, its number of ones (OneMax dynamics only depend on that count,
//! so the lumped chain is exact). The one-generation kernel enumerates every
//! mutation outcome and every subset of successful migration edges, exactly as
//! the simulator samples them. States holding an optimum are absorbing.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::island_model::{ModelConfig, ModelError};
use crate::objective::{BitString, ObjectiveKind};

/// Default cap on the number of joint states (`local^μ · τ`).
pub const DEFAULT_STATE_CAP: usize = 4096;

const MAX_IN_DEGREE: usize = 16;
const ROW_TOLERANCE: f64 = 1e-10;
const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("state space of {states} states exceeds the cap of {cap}")]
    StateSpaceTooLarge { states: u128, cap: usize },
    #[error("absorption is unreachable from the start distribution")]
    SingularSystem,
    #[error("linear solve residual {0:e} exceeds tolerance")]
    Inaccurate(f64),
    #[error("lumped chain requested for a non-OneMax objective")]
    NotLumpable,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// How an island's state is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lumping {
    /// Bit strings when they fit under the cap, else OneMax counts if possible.
    Auto,
    Bitstrings,
    OneMaxCounts,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub state_cap: usize,
    pub lumping: Lumping,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { state_cap: DEFAULT_STATE_CAP, lumping: Lumping::Auto }
    }
}

/// Single-island description: mutation-plus-selection kernel, fitness and
/// initial distribution over local states.
#[derive(Debug, Clone)]
struct LocalModel {
    kernel: Vec<Vec<(usize, f64)>>,
    fitness: Vec<i64>,
    optimal: Vec<bool>,
    initial: Vec<(usize, f64)>,
    lumping: Lumping,
}

impl LocalModel {
    fn size(&self) -> usize {
        self.fitness.len()
    }

    fn bitstrings(cfg: &ModelConfig) -> Self {
        let n = cfg.objective.n();
        let size = 1usize << n;
        let q = 1.0 / n as f64;
        let fitness: Vec<i64> = (0..size)
            .map(|x| cfg.objective.evaluate(&BitString::from_u64(x as u64, n)).expect("length matches"))
            .collect();
        let optimum = cfg.objective.optimum_value();
        let kernel = (0..size)
            .map(|x| {
                let mut stay = 0.0;
                let mut row = Vec::new();
                for y in 0..size {
                    let d = (x ^ y).count_ones() as i32;
                    let prob = q.powi(d) * (1.0 - q).powi(n as i32 - d);
                    if prob == 0.0 {
                        continue;
                    }
                    if y != x && fitness[y] >= fitness[x] {
                        row.push((y, prob));
                    } else {
                        stay += prob;
                    }
                }
                if stay > 0.0 {
                    row.push((x, stay));
                }
                row
            })
            .collect();
        let initial = match &cfg.fixed_start {
            Some(start) => vec![(start.to_u64() as usize, 1.0)],
            None => (0..size).map(|x| (x, 1.0 / size as f64)).collect(),
        };
        LocalModel {
            kernel,
            optimal: fitness.iter().map(|&f| f == optimum).collect(),
            fitness,
            initial,
            lumping: Lumping::Bitstrings,
        }
    }

    fn onemax_counts(cfg: &ModelConfig) -> Self {
        let n = cfg.objective.n();
        let q = 1.0 / n as f64;
        let kernel = (0..=n)
            .map(|i| {
                let mut probs = vec![0.0; n + 1];
                for a in 0..=i {
                    for b in 0..=(n - i) {
                        let d = (a + b) as i32;
                        let prob = binomial(i, a) * binomial(n - i, b) * q.powi(d) * (1.0 - q).powi(n as i32 - d);
                        let j = i + b - a;
                        // Elitist: worse offspring are discarded.
                        probs[if j >= i { j } else { i }] += prob;
                    }
                }
                probs.into_iter().enumerate().filter(|&(_, p)| p > 0.0).collect()
            })
            .collect();
        let initial = match &cfg.fixed_start {
            Some(start) => vec![(start.count_ones(), 1.0)],
            None => (0..=n).map(|i| (i, binomial(n, i) / 2f64.powi(n as i32))).collect(),
        };
        LocalModel {
            kernel,
            fitness: (0..=n as i64).collect(),
            optimal: (0..=n).map(|i| i == n).collect(),
            initial,
            lumping: Lumping::OneMaxCounts,
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn joint_states(local: usize, mu: usize, tau: u64) -> u128 {
    (local as u128).saturating_pow(mu as u32).saturating_mul(tau as u128)
}

/// Absorbing Markov chain of one configuration. Transient states are indexed
/// `0..num_transient()`; index `num_transient()` is the single absorbing state.
#[derive(Debug, Clone)]
pub struct ChainModel {
    mu: usize,
    local_size: usize,
    tau: u64,
    lumping: Lumping,
    /// Joint configuration code and phase of each transient state.
    states: Vec<(u64, u64)>,
    index: HashMap<(u64, u64), usize>,
    rows: Vec<Vec<(usize, f64)>>,
    initial: Vec<(usize, f64)>,
}

impl ChainModel {
    pub fn num_transient(&self) -> usize {
        self.states.len()
    }

    pub fn absorbing(&self) -> usize {
        self.states.len()
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn lumping(&self) -> Lumping {
        self.lumping
    }

    pub fn local_size(&self) -> usize {
        self.local_size
    }

    /// Outgoing transitions of a transient state; targets equal to
    /// [`ChainModel::absorbing`] denote absorption.
    pub fn row(&self, state: usize) -> &[(usize, f64)] {
        &self.rows[state]
    }

    /// Probability of moving from `from` to `to`, including to the absorbing state.
    pub fn transition(&self, from: usize, to: usize) -> f64 {
        self.rows[from].iter().filter(|(t, _)| *t == to).map(|(_, p)| p).sum()
    }

    /// Transient start distribution; mass on already-optimal starts is omitted
    /// because those runs take zero generations.
    pub fn initial_distribution(&self) -> &[(usize, f64)] {
        &self.initial
    }

    /// Index of the transient state with the given per-island local states
    /// (bit strings as integers, or ones counts) and phase.
    pub fn state_index(&self, locals: &[usize], phase: u64) -> Option<usize> {
        if locals.len() != self.mu {
            return None;
        }
        let code = encode(locals, self.local_size)?;
        self.index.get(&(code, phase)).copied()
    }

    /// Per-island local states of a transient state, and its phase.
    pub fn state(&self, index: usize) -> (Vec<usize>, u64) {
        let (code, phase) = self.states[index];
        (decode(code, self.local_size, self.mu), phase)
    }

    pub fn max_row_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| (row.iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn encode(locals: &[usize], base: usize) -> Option<u64> {
    let mut code = 0u64;
    for &a in locals.iter().rev() {
        if a >= base {
            return None;
        }
        code = code * base as u64 + a as u64;
    }
    Some(code)
}

fn decode(mut code: u64, base: usize, mu: usize) -> Vec<usize> {
    (0..mu)
        .map(|_| {
            let a = (code % base as u64) as usize;
            code /= base as u64;
            a
        })
        .collect()
}

/// Builds the joint chain for `cfg`. Fails up front if `local^μ · τ` exceeds
/// the state cap.
pub fn build_chain(cfg: &ModelConfig, opts: OracleOptions) -> Result<ChainModel, OracleError> {
    cfg.validate()?;
    let mu = cfg.mu();
    let n = cfg.objective.n();
    let is_onemax = matches!(cfg.objective.kind(), ObjectiveKind::OneMax);
    let bit_states = if n < 64 { joint_states(1 << n, mu, cfg.tau) } else { u128::MAX };
    let lumping = match opts.lumping {
        Lumping::Auto if bit_states <= opts.state_cap as u128 || !is_onemax => Lumping::Bitstrings,
        Lumping::Auto => Lumping::OneMaxCounts,
        Lumping::OneMaxCounts if !is_onemax => return Err(OracleError::NotLumpable),
        other => other,
    };
    let states = match lumping {
        Lumping::OneMaxCounts => joint_states(n + 1, mu, cfg.tau),
        _ => bit_states,
    };
    if states > opts.state_cap as u128 {
        return Err(OracleError::StateSpaceTooLarge { states, cap: opts.state_cap });
    }
    let local = match lumping {
        Lumping::OneMaxCounts => LocalModel::onemax_counts(cfg),
        _ => LocalModel::bitstrings(cfg),
    };
    let in_edges = in_neighbours(cfg);
    if in_edges.iter().any(|v| v.len() > MAX_IN_DEGREE) {
        return Err(OracleError::StateSpaceTooLarge { states: u128::MAX, cap: opts.state_cap });
    }
    Builder { cfg, local: &local, in_edges, mu, migration: HashMap::new() }.build()
}

fn in_neighbours(cfg: &ModelConfig) -> Vec<Vec<usize>> {
    let mut incoming = vec![Vec::new(); cfg.mu()];
    for (u, v) in cfg.topology.edges() {
        incoming[v].push(u);
    }
    incoming
}

struct Builder<'a> {
    cfg: &'a ModelConfig,
    local: &'a LocalModel,
    in_edges: Vec<Vec<usize>>,
    mu: usize,
    migration: HashMap<u64, Vec<(u64, f64)>>,
}

impl Builder<'_> {
    fn build(mut self) -> Result<ChainModel, OracleError> {
        let base = self.local.size();
        let tau = self.cfg.tau;
        let configs = (base as u64).pow(self.mu as u32);
        let mut states = Vec::new();
        let mut index = HashMap::new();
        for code in 0..configs {
            if self.any_optimal(code) {
                continue;
            }
            for phase in 0..tau {
                index.insert((code, phase), states.len());
                states.push((code, phase));
            }
        }
        let absorbing = states.len();
        let mut rows = Vec::with_capacity(states.len());
        for &(code, phase) in &states {
            let next_phase = (phase + 1) % tau;
            let migrate = next_phase == 0 && self.cfg.p > 0.0 && self.mu > 1;
            let mut absorb = 0.0;
            let mut targets: HashMap<usize, f64> = HashMap::new();
            for (mutated, prob) in self.mutation_outcomes(code) {
                if self.any_optimal(mutated) {
                    absorb += prob;
                    continue;
                }
                if migrate {
                    for &(after, q) in self.migration_outcomes(mutated) {
                        *targets.entry(index[&(after, next_phase)]).or_default() += prob * q;
                    }
                } else {
                    *targets.entry(index[&(mutated, next_phase)]).or_default() += prob;
                }
            }
            let mut row: Vec<(usize, f64)> = targets.into_iter().collect();
            row.sort_by_key(|&(t, _)| t);
            if absorb > 0.0 {
                row.push((absorbing, absorb));
            }
            rows.push(row);
        }
        let mut initial: HashMap<usize, f64> = HashMap::new();
        for (code, prob) in product(self.mu, |_| self.local.initial.clone(), base) {
            if let Some(&i) = index.get(&(code, 0)) {
                *initial.entry(i).or_default() += prob;
            }
        }
        let mut initial: Vec<(usize, f64)> = initial.into_iter().collect();
        initial.sort_by_key(|&(i, _)| i);
        let chain = ChainModel {
            mu: self.mu,
            local_size: base,
            tau,
            lumping: self.local.lumping,
            states,
            index,
            rows,
            initial,
        };
        debug_assert!(chain.max_row_error() <= ROW_TOLERANCE);
        Ok(chain)
    }

    fn any_optimal(&self, code: u64) -> bool {
        decode(code, self.local.size(), self.mu).iter().any(|&a| self.local.optimal[a])
    }

    fn mutation_outcomes(&self, code: u64) -> Vec<(u64, f64)> {
        let locals = decode(code, self.local.size(), self.mu);
        product(self.mu, |i| self.local.kernel[locals[i]].clone(), self.local.size())
    }

    /// Distribution of the configuration after migration. Receivers are
    /// independent given the post-mutation configuration, since every edge
    /// has exactly one receiver.
    fn migration_outcomes(&mut self, code: u64) -> &[(u64, f64)] {
        if !self.migration.contains_key(&code) {
            let locals = decode(code, self.local.size(), self.mu);
            let per_receiver: Vec<Vec<(usize, f64)>> =
                (0..self.mu).map(|dst| self.receiver_outcomes(&locals, dst)).collect();
            let outcomes = product(self.mu, |i| per_receiver[i].clone(), self.local.size());
            self.migration.insert(code, outcomes);
        }
        &self.migration[&code]
    }

    fn receiver_outcomes(&self, locals: &[usize], dst: usize) -> Vec<(usize, f64)> {
        let p = self.cfg.p;
        let sources = &self.in_edges[dst];
        let own = self.local.fitness[locals[dst]];
        let mut out: HashMap<usize, f64> = HashMap::new();
        for mask in 0u32..(1 << sources.len()) {
            let k = mask.count_ones() as i32;
            let prob = p.powi(k) * (1.0 - p).powi(sources.len() as i32 - k);
            if prob == 0.0 {
                continue;
            }
            let chosen: Vec<usize> = (0..sources.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| locals[sources[b]])
                .collect();
            let best = chosen.iter().map(|&a| self.local.fitness[a]).max();
            match best {
                Some(best) if best >= own => {
                    let ties: Vec<usize> =
                        chosen.into_iter().filter(|&a| self.local.fitness[a] == best).collect();
                    let share = prob / ties.len() as f64;
                    for a in ties {
                        *out.entry(a).or_default() += share;
                    }
                }
                _ => *out.entry(locals[dst]).or_default() += prob,
            }
        }
        let mut out: Vec<(usize, f64)> = out.into_iter().collect();
        out.sort_by_key(|&(a, _)| a);
        out
    }
}

/// Product distribution over `mu` independent coordinates, returned as
/// joint codes in base `base`.
fn product<F>(mu: usize, coordinate: F, base: usize) -> Vec<(u64, f64)>
where
    F: Fn(usize) -> Vec<(usize, f64)>,
{
    let mut joint = vec![(0u64, 1.0)];
    let mut scale = 1u64;
    for i in 0..mu {
        let dist = coordinate(i);
        joint = joint
            .iter()
            .flat_map(|&(code, p)| dist.iter().map(move |&(a, q)| (code + a as u64 * scale, p * q)))
            .collect();
        scale *= base as u64;
    }
    joint
}

/// Solves `(I - Q) t = 1` for every transient state. States from which
/// absorption is unreachable get `None`.
pub fn absorption_times(chain: &ChainModel) -> Result<Vec<Option<f64>>, OracleError> {
    let total = chain.num_transient();
    // Reverse reachability from the absorbing state.
    let mut reverse = vec![Vec::new(); total];
    let mut live = vec![false; total];
    let mut stack = Vec::new();
    for (from, row) in chain.rows.iter().enumerate() {
        for &(to, p) in row {
            if p <= 0.0 {
                continue;
            }
            if to == chain.absorbing() {
                if !live[from] {
                    live[from] = true;
                    stack.push(from);
                }
            } else {
                reverse[to].push(from);
            }
        }
    }
    while let Some(v) = stack.pop() {
        for &u in &reverse[v] {
            if !live[u] {
                live[u] = true;
                stack.push(u);
            }
        }
    }
    let kept: Vec<usize> = (0..total).filter(|&i| live[i]).collect();
    let mut position = vec![usize::MAX; total];
    for (k, &i) in kept.iter().enumerate() {
        position[i] = k;
    }
    let size = kept.len();
    let mut a = DMatrix::<f64>::identity(size, size);
    for (k, &i) in kept.iter().enumerate() {
        for &(to, p) in &chain.rows[i] {
            if to < total {
                if position[to] == usize::MAX {
                    // Mass leaking into a non-absorbing trap: expected time infinite.
                    return Err(OracleError::SingularSystem);
                }
                a[(k, position[to])] -= p;
            }
        }
    }
    let ones = DVector::<f64>::from_element(size, 1.0);
    let t = a.clone().lu().solve(&ones).ok_or(OracleError::SingularSystem)?;
    let residual = (&a * &t - &ones).amax();
    let scale = 1.0 + t.amax();
    if !(residual <= RESIDUAL_TOLERANCE * scale) {
        return Err(OracleError::Inaccurate(residual));
    }
    let mut out = vec![None; total];
    for (k, &i) in kept.iter().enumerate() {
        out[i] = Some(t[k]);
    }
    Ok(out)
}

/// Expected number of generations until absorption, averaged over `start`
/// (transient state, weight) pairs. Missing weight is treated as already absorbed.
pub fn expected_absorption_time(chain: &ChainModel, start: &[(usize, f64)]) -> Result<f64, OracleError> {
    let times = absorption_times(chain)?;
    let mut total = 0.0;
    for &(i, w) in start {
        if w == 0.0 {
            continue;
        }
        match times.get(i).copied().flatten() {
            Some(t) => total += w * t,
            None => return Err(OracleError::SingularSystem),
        }
    }
    Ok(total)
}

/// Exact expected `t_par` of `cfg` from its own start distribution.
pub fn expected_parallel_time(cfg: &ModelConfig, opts: OracleOptions) -> Result<f64, OracleError> {
    let chain = build_chain(cfg, opts)?;
    expected_absorption_time(&chain, chain.initial_distribution())
}

/// `E[min(T_1, ..., T_copies)]` for independent copies of a single-island run
/// of `cfg`'s objective and start: `Σ_t P(T > t)^copies`.
pub fn min_of_independent(cfg: &ModelConfig, copies: usize, opts: OracleOptions) -> Result<f64, OracleError> {
    let single = crate::topology::TopologyGraph::build(crate::topology::TopologySpec::Complete { mu: 1 })
        .expect("one vertex is a valid topology");
    let single_cfg = ModelConfig { topology: std::sync::Arc::new(single), tau: 1, ..cfg.clone() };
    let chain = build_chain(&single_cfg, opts)?;
    // Guard against traps before iterating.
    absorption_times(&chain)?;
    let mut dist = vec![0.0; chain.num_transient()];
    for &(i, w) in chain.initial_distribution() {
        dist[i] += w;
    }
    let mut total = 0.0;
    let mut survival: f64 = dist.iter().sum();
    let mut steps = 0u64;
    while survival > 0.0 {
        let term = survival.powi(copies as i32);
        total += term;
        if term < 1e-15 || steps > 100_000_000 {
            break;
        }
        let mut next = vec![0.0; dist.len()];
        for (i, &w) in dist.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for &(to, p) in chain.row(i) {
                if to < next.len() {
                    next[to] += w * p;
                }
            }
        }
        dist = next;
        survival = dist.iter().sum();
        steps += 1;
    }
    Ok(total)
}

/// Memoizes oracle values by configuration.
#[derive(Debug, Default)]
pub struct OracleCache {
    values: HashMap<String, f64>,
}

impl OracleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn key(cfg: &ModelConfig, opts: OracleOptions) -> String {
        format!(
            "{}|{}|{:?}|{}|{}|{}|{:?}|{}",
            cfg.objective.label(),
            cfg.objective.n(),
            cfg.topology.spec(),
            cfg.p,
            cfg.tau,
            cfg.fixed_start.as_ref().map(|b| b.to_string()).unwrap_or_default(),
            opts.lumping,
            opts.state_cap,
        )
    }

    pub fn expected_parallel_time(&mut self, cfg: &ModelConfig, opts: OracleOptions) -> Result<f64, OracleError> {
        let key = Self::key(cfg, opts);
        if let Some(&v) = self.values.get(&key) {
            return Ok(v);
        }
        let v = expected_parallel_time(cfg, opts)?;
        self.values.insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
