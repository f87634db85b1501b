//! The parallel (1+1) EA: `μ` islands, each running a (1+1) EA with standard
//! bit mutation, exchanging their current individuals along the directed
//! edges of a migration topology.
//!
//! One generation has three phases, all reading a snapshot of the previous
//! phase:
//!
//! 1. every island creates one offspring and keeps it iff it is not worse;
//! 2. in generations divisible by `τ`, each directed edge `(i, j)` carries a
//!    copy of island `i`'s individual with probability `p`;
//! 3. each island picks a best incoming migrant (ties uniformly at random) and
//!    takes it iff it is not worse than its own individual.
//!
//! `t_seq` counts one evaluation per island per generation and excludes the
//! initial population, so `t_seq = μ · t_par` holds exactly.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::objective::{BitString, Objective};
use crate::rng::{self, Stream};
use crate::topology::TopologyGraph;

/// Generation cap used when a config does not set one.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

const TAG_INIT: u64 = 1;
const TAG_MUTATION: u64 = 2;
const TAG_MIGRATION: u64 = 3;
const TAG_TIES: u64 = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("transmission probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("migration interval must be at least 1")]
    InvalidInterval,
    #[error("generation budget must be at least 1")]
    InvalidBudget,
    #[error("fixed start has {got} bits, objective has {expected}")]
    FixedStartLength { expected: usize, got: usize },
}

#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub objective: Objective,
    pub topology: Arc<TopologyGraph>,
    /// Per-edge transmission probability.
    pub p: f64,
    /// Migration interval; migration happens in generations divisible by `tau`.
    pub tau: u64,
    pub seed: u64,
    /// Maximum number of generations.
    pub budget: u64,
    /// Places this string on every island instead of a uniform random start.
    pub fixed_start: Option<BitString>,
}

impl ModelConfig {
    pub fn new(objective: Objective, topology: Arc<TopologyGraph>) -> Self {
        ModelConfig {
            objective,
            topology,
            p: 1.0,
            tau: 1,
            seed: 0,
            budget: DEFAULT_BUDGET,
            fixed_start: None,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_tau(mut self, tau: u64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_fixed_start(mut self, start: BitString) -> Self {
        self.fixed_start = Some(start);
        self
    }

    pub fn mu(&self) -> usize {
        self.topology.num_vertices()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(ModelError::InvalidProbability(self.p));
        }
        if self.tau == 0 {
            return Err(ModelError::InvalidInterval);
        }
        if self.budget == 0 {
            return Err(ModelError::InvalidBudget);
        }
        if let Some(start) = &self.fixed_start {
            if start.len() != self.objective.n() {
                return Err(ModelError::FixedStartLength {
                    expected: self.objective.n(),
                    got: start.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IslandState {
    current: BitString,
    fitness: i64,
}

impl IslandState {
    pub fn new(objective: &Objective, current: BitString) -> Self {
        let fitness = objective.fitness(&current);
        IslandState { current, fitness }
    }

    pub fn current(&self) -> &BitString {
        &self.current
    }

    pub fn fitness(&self) -> i64 {
        self.fitness
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOutcome {
    /// Generations until the first optimum was created.
    pub t_par: u64,
    /// Offspring evaluations until then (`μ · t_par`).
    pub t_seq: u64,
    /// Migrant copies sent before the optimum was found.
    pub t_com: u64,
    pub success: bool,
    pub best_fitness: i64,
}

/// Standard bit mutation with rate `1/n`, sampled as a Binomial(n, 1/n) flip
/// count followed by a uniform choice of that many distinct positions. This is
/// the same distribution as independent per-bit flips at O(1) expected cost.
#[derive(Debug, Clone)]
pub struct Mutator {
    n: usize,
    cdf: Vec<f64>,
}

impl Mutator {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "mutation needs at least one bit");
        let cdf = if n == 1 {
            vec![0.0, 1.0]
        } else {
            let q = 1.0 / n as f64;
            let ratio = q / (1.0 - q);
            let mut pmf = (1.0 - q).powi(n as i32);
            let mut acc = 0.0;
            let mut cdf = Vec::new();
            for k in 0..=n {
                acc += pmf;
                cdf.push(acc);
                if pmf < 1e-300 {
                    break;
                }
                pmf *= (n - k) as f64 / (k + 1) as f64 * ratio;
            }
            cdf
        };
        let mut cdf = cdf;
        *cdf.last_mut().unwrap() = 1.0;
        Mutator { n, cdf }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Writes the positions to flip into `out` (cleared first).
    #[inline]
    pub fn sample_flips<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<usize>) {
        out.clear();
        let u: f64 = rng.random();
        let k = self.cdf.iter().position(|&c| u < c).unwrap_or(self.cdf.len() - 1);
        // Floyd's sampling of a uniform k-subset of 0..n.
        for j in self.n - k..self.n {
            let t = rng.random_range(0..=j);
            if out.contains(&t) {
                out.push(j);
            } else {
                out.push(t);
            }
        }
    }
}

/// Returns a mutated copy of `x`; each bit flips independently with probability `1/n`.
pub fn standard_bit_mutation<R: Rng + ?Sized>(x: &BitString, rng: &mut R) -> BitString {
    let mut flips = Vec::new();
    Mutator::new(x.len()).sample_flips(rng, &mut flips);
    let mut y = x.clone();
    for i in flips {
        y.flip(i);
    }
    y
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepReport {
    /// 1-based index of the generation just executed.
    pub generation: u64,
    pub migrants_sent: u64,
    /// Whether some island held an optimum after the mutation phase.
    pub optimum_found: bool,
}

/// Live state of one run.
#[derive(Debug)]
pub struct Simulation<'a> {
    cfg: &'a ModelConfig,
    islands: Vec<IslandState>,
    mutator: Mutator,
    mutation_rng: Vec<Stream>,
    migration_rng: Vec<Stream>,
    tie_rng: Vec<Stream>,
    flips: Vec<usize>,
    best_source: Vec<Option<usize>>,
    best_incoming: Vec<i64>,
    tie_count: Vec<u32>,
    scratch: Vec<BitString>,
    generation: u64,
    migrants: u64,
    optimum: i64,
}

impl<'a> Simulation<'a> {
    pub fn new(cfg: &'a ModelConfig) -> Result<Self, ModelError> {
        cfg.validate()?;
        let mu = cfg.mu();
        let n = cfg.objective.n();
        let kind = cfg.topology.kind().code();
        let key = |tag: u64, i: usize| [tag, kind, mu as u64, i as u64];
        let islands = (0..mu)
            .map(|i| {
                let x = match &cfg.fixed_start {
                    Some(start) => start.clone(),
                    None => BitString::random(n, &mut rng::stream(cfg.seed, &key(TAG_INIT, i))),
                };
                IslandState::new(&cfg.objective, x)
            })
            .collect();
        let streams = |tag| (0..mu).map(|i| rng::stream(cfg.seed, &key(tag, i))).collect();
        Ok(Simulation {
            cfg,
            islands,
            mutator: Mutator::new(n),
            mutation_rng: streams(TAG_MUTATION),
            migration_rng: streams(TAG_MIGRATION),
            tie_rng: streams(TAG_TIES),
            flips: Vec::with_capacity(8),
            best_source: vec![None; mu],
            best_incoming: vec![i64::MIN; mu],
            tie_count: vec![0; mu],
            scratch: vec![BitString::zeros(n); mu],
            generation: 0,
            migrants: 0,
            optimum: cfg.objective.optimum_value(),
        })
    }

    pub fn islands(&self) -> &[IslandState] {
        &self.islands
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn migrants_sent(&self) -> u64 {
        self.migrants
    }

    pub fn best_fitness(&self) -> i64 {
        self.islands.iter().map(|s| s.fitness).max().unwrap_or(i64::MIN)
    }

    pub fn has_optimum(&self) -> bool {
        self.islands.iter().any(|s| s.fitness == self.optimum)
    }

    /// Executes one full generation.
    pub fn step(&mut self) -> StepReport {
        self.advance(false)
    }

    /// One generation; with `stop_at_optimum` the migration phase is skipped
    /// once the mutation phase has produced an optimum.
    fn advance(&mut self, stop_at_optimum: bool) -> StepReport {
        self.generation += 1;
        let optimum_found = self.mutation_phase();
        let mut sent = 0;
        let migrate = self.generation % self.cfg.tau == 0 && self.cfg.p > 0.0 && self.islands.len() > 1;
        if migrate && !(stop_at_optimum && optimum_found) {
            sent = self.migration_phase();
            self.migrants += sent;
        }
        StepReport { generation: self.generation, migrants_sent: sent, optimum_found }
    }

    fn mutation_phase(&mut self) -> bool {
        let objective = &self.cfg.objective;
        let mut found = false;
        for (island, rng) in self.islands.iter_mut().zip(self.mutation_rng.iter_mut()) {
            self.mutator.sample_flips(rng, &mut self.flips);
            if !self.flips.is_empty() {
                for &i in &self.flips {
                    island.current.flip(i);
                }
                let f = objective.fitness(&island.current);
                if f >= island.fitness {
                    island.fitness = f;
                } else {
                    for &i in &self.flips {
                        island.current.flip(i);
                    }
                }
            }
            found |= island.fitness == self.optimum;
        }
        found
    }

    fn migration_phase(&mut self) -> u64 {
        let p = self.cfg.p;
        let adjacency = self.cfg.topology.adjacency();
        self.best_source.fill(None);
        self.best_incoming.fill(i64::MIN);
        self.tie_count.fill(0);
        let mut sent = 0;
        for (src, targets) in adjacency.iter().enumerate() {
            let f = self.islands[src].fitness;
            let rng = &mut self.migration_rng[src];
            for &dst in targets {
                if p < 1.0 && rng.random::<f64>() >= p {
                    continue;
                }
                sent += 1;
                if f > self.best_incoming[dst] {
                    self.best_incoming[dst] = f;
                    self.best_source[dst] = Some(src);
                    self.tie_count[dst] = 1;
                } else if f == self.best_incoming[dst] {
                    // Reservoir choice keeps every tied migrant equally likely.
                    self.tie_count[dst] += 1;
                    if self.tie_rng[dst].random_range(0..self.tie_count[dst]) == 0 {
                        self.best_source[dst] = Some(src);
                    }
                }
            }
        }
        let mut accepted = false;
        for dst in 0..self.islands.len() {
            if let Some(src) = self.best_source[dst] {
                if self.best_incoming[dst] >= self.islands[dst].fitness {
                    self.scratch[dst].copy_from(&self.islands[src].current);
                    accepted = true;
                } else {
                    self.best_source[dst] = None;
                }
            }
        }
        if accepted {
            for dst in 0..self.islands.len() {
                if self.best_source[dst].is_some() {
                    std::mem::swap(&mut self.islands[dst].current, &mut self.scratch[dst]);
                    self.islands[dst].fitness = self.best_incoming[dst];
                }
            }
        }
        sent
    }

    fn outcome(&self, success: bool) -> RunOutcome {
        RunOutcome {
            t_par: self.generation,
            t_seq: self.generation * self.islands.len() as u64,
            t_com: self.migrants,
            success,
            best_fitness: self.best_fitness(),
        }
    }
}

/// Runs the island model until an optimum is created or the budget runs out.
pub fn run(cfg: &ModelConfig) -> Result<RunOutcome, ModelError> {
    run_observed(cfg, |_, _| {})
}

/// Like [`run`], calling `observer` after every generation.
pub fn run_observed<F>(cfg: &ModelConfig, mut observer: F) -> Result<RunOutcome, ModelError>
where
    F: FnMut(&StepReport, &[IslandState]),
{
    let mut sim = Simulation::new(cfg)?;
    if sim.has_optimum() {
        return Ok(sim.outcome(true));
    }
    while sim.generation < cfg.budget {
        let report = sim.advance(true);
        observer(&report, &sim.islands);
        if report.optimum_found {
            return Ok(sim.outcome(true));
        }
    }
    Ok(sim.outcome(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::TopologySpec;
    use rand::SeedableRng;

    fn graph(spec: TopologySpec) -> Arc<TopologyGraph> {
        Arc::new(TopologyGraph::build(spec).unwrap())
    }

    #[test]
    fn single_bit_always_flips() {
        let mut rng = Stream::seed_from_u64(1);
        let x: BitString = "0".parse().unwrap();
        for _ in 0..100 {
            assert_eq!(standard_bit_mutation(&x, &mut rng).to_string(), "1");
        }
        assert_eq!(x.to_string(), "0");
    }

    #[test]
    fn mutation_is_deterministic_per_seed() {
        let x = BitString::zeros(50);
        let a = standard_bit_mutation(&x, &mut Stream::seed_from_u64(9));
        let b = standard_bit_mutation(&x, &mut Stream::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn mean_hamming_distance_is_one() {
        let mut rng = Stream::seed_from_u64(5);
        for n in [2usize, 7, 64, 200] {
            let x = BitString::zeros(n);
            let reps = 200_000;
            let total: usize = (0..reps).map(|_| standard_bit_mutation(&x, &mut rng).count_ones()).sum();
            let mean = total as f64 / reps as f64;
            // variance of Bin(n, 1/n) is < 1, so 5 standard errors is ~0.011
            assert!((mean - 1.0).abs() < 0.012, "n={n} mean={mean}");
        }
    }

    #[test]
    fn per_bit_flip_rate_is_one_over_n() {
        let n = 5;
        let mut rng = Stream::seed_from_u64(11);
        let mut counts = [0usize; 5];
        let mut both01 = 0usize;
        let reps = 400_000;
        let x = BitString::zeros(n);
        for _ in 0..reps {
            let y = standard_bit_mutation(&x, &mut rng);
            for (i, c) in counts.iter_mut().enumerate() {
                *c += usize::from(y.get(i));
            }
            both01 += usize::from(y.get(0) && y.get(1));
        }
        for c in counts {
            assert!((c as f64 / reps as f64 - 0.2).abs() < 0.004);
        }
        // independence: P(both) = 1/25
        assert!((both01 as f64 / reps as f64 - 0.04).abs() < 0.002);
    }

    #[test]
    fn deterministic_single_bit_run() {
        let cfg = ModelConfig::new(Objective::onemax(1).unwrap(), graph(TopologySpec::UniRing { mu: 1 }))
            .with_fixed_start("0".parse().unwrap());
        let out = run(&cfg).unwrap();
        assert_eq!(out, RunOutcome { t_par: 1, t_seq: 1, t_com: 0, success: true, best_fitness: 1 });
    }

    #[test]
    fn optimal_start_costs_nothing() {
        let cfg = ModelConfig::new(Objective::leading_ones(6).unwrap(), graph(TopologySpec::Complete { mu: 4 }))
            .with_fixed_start(BitString::ones(6));
        let out = run(&cfg).unwrap();
        assert_eq!((out.t_par, out.t_seq, out.t_com, out.success), (0, 0, 0, true));
    }

    #[test]
    fn zero_probability_sends_nothing() {
        let cfg = ModelConfig::new(Objective::onemax(20).unwrap(), graph(TopologySpec::Complete { mu: 5 }))
            .with_p(0.0)
            .with_seed(3);
        let out = run(&cfg).unwrap();
        assert!(out.success);
        assert_eq!(out.t_com, 0);
        assert_eq!(out.t_seq, 5 * out.t_par);
    }

    #[test]
    fn interval_beyond_budget_sends_nothing() {
        let cfg = ModelConfig::new(Objective::leading_ones(30).unwrap(), graph(TopologySpec::Complete { mu: 4 }))
            .with_tau(1_000)
            .with_budget(999);
        let out = run(&cfg).unwrap();
        assert_eq!(out.t_com, 0);
    }

    #[test]
    fn best_migrant_reaches_everyone() {
        // Fitnesses (3, 5) before migration; complete, p = 1, tau = 1.
        let obj = Objective::onemax(8).unwrap();
        let cfg = ModelConfig::new(obj.clone(), graph(TopologySpec::Complete { mu: 2 })).with_seed(1);
        let mut sim = Simulation::new(&cfg).unwrap();
        sim.islands = vec![
            IslandState::new(&obj, "11100000".parse().unwrap()),
            IslandState::new(&obj, "11111000".parse().unwrap()),
        ];
        let report = sim.step();
        assert_eq!(report.migrants_sent, 2);
        assert!(sim.islands.iter().all(|s| s.fitness >= 5));
        assert_eq!(sim.islands[0].fitness, sim.islands[1].fitness);
    }

    #[test]
    fn single_island_step_is_a_plain_generation() {
        let cfg = ModelConfig::new(Objective::onemax(10).unwrap(), graph(TopologySpec::Complete { mu: 1 }));
        let mut sim = Simulation::new(&cfg).unwrap();
        for _ in 0..50 {
            assert_eq!(sim.step().migrants_sent, 0);
        }
    }

    #[test]
    fn config_validation() {
        let base = ModelConfig::new(Objective::onemax(4).unwrap(), graph(TopologySpec::UniRing { mu: 2 }));
        assert_eq!(base.clone().with_p(1.5).validate(), Err(ModelError::InvalidProbability(1.5)));
        assert_eq!(base.clone().with_tau(0).validate(), Err(ModelError::InvalidInterval));
        assert_eq!(base.clone().with_budget(0).validate(), Err(ModelError::InvalidBudget));
        assert_eq!(
            base.with_fixed_start("01".parse().unwrap()).validate(),
            Err(ModelError::FixedStartLength { expected: 4, got: 2 })
        );
    }

    #[test]
    fn budget_exhaustion_is_data() {
        let cfg = ModelConfig::new(Objective::jump(6, 12).unwrap(), graph(TopologySpec::UniRing { mu: 2 }))
            .with_budget(5)
            .with_fixed_start(BitString::zeros(12));
        let out = run(&cfg).unwrap();
        assert!(!out.success);
        assert_eq!(out.t_par, 5);
        assert_eq!(out.t_seq, 10);
        assert!(out.best_fitness < cfg.objective.optimum_value());
    }

    #[test]
    fn determinism() {
        let cfg = ModelConfig::new(Objective::leading_ones(24).unwrap(), graph(TopologySpec::BiRing { mu: 6 }))
            .with_p(0.3)
            .with_seed(77);
        assert_eq!(run(&cfg).unwrap(), run(&cfg).unwrap());
        let outcomes: std::collections::HashSet<u64> =
            (0..8).map(|s| run(&cfg.clone().with_seed(s)).unwrap().t_par).collect();
        assert!(outcomes.len() > 1, "different seeds should give different runs");
    }
}
