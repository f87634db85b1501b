//! Closed-form upper bounds on expected running and propagation times.
//!
//! All level sums run over the non-optimal levels `1..m-1`. `log` is base 2
//! and `ln` natural; each [`BoundReport`] records the base it used. Topology
//! bounds are `+inf` at `p = 0`, where no information flows.

use std::f64::consts::E;
use std::fmt;

use thiserror::Error;

use crate::objective::LevelPartition;
use crate::topology::{TopologyGraph, TopologyKind};

/// Truncation threshold for [`general_parallel_bound`].
pub const DEFAULT_EPSILON: f64 = 1e-12;

const MAX_BLOCKS: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("success probability must be positive")]
    ZeroSuccessProbability,
    #[error("series does not converge (some success probability is zero)")]
    NonConvergent,
    #[error("bound not defined for topology {0}")]
    UnsupportedKind(TopologyKind),
    #[error("parameter out of domain: {0}")]
    DomainError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundSource {
    SeqFitnessLevel,
    GeneralParallel,
    LevelTime,
    /// Ring bound, valid for every strongly connected topology.
    Ring,
    Torus,
    Hypercube,
    Complete,
    CompleteRefined,
    /// Shortest-path tail bound with parameters `(c, k, s_k)`.
    PropagationPath,
    PropagationComplete,
    /// Diameter-plus-log bound for undirected graphs.
    PropagationDiameter,
    Communication,
}

impl BoundSource {
    pub fn label(self) -> &'static str {
        match self {
            BoundSource::SeqFitnessLevel => "seq_fitness_level",
            BoundSource::GeneralParallel => "general_parallel",
            BoundSource::LevelTime => "level_time",
            BoundSource::Ring => "ring",
            BoundSource::Torus => "torus",
            BoundSource::Hypercube => "hypercube",
            BoundSource::Complete => "complete",
            BoundSource::CompleteRefined => "complete_refined",
            BoundSource::PropagationPath => "propagation_path",
            BoundSource::PropagationComplete => "propagation_complete",
            BoundSource::PropagationDiameter => "propagation_diameter",
            BoundSource::Communication => "communication",
        }
    }
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Two,
    Natural,
}

impl LogBase {
    pub fn label(self) -> &'static str {
        match self {
            LogBase::Two => "2",
            LogBase::Natural => "e",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub value: f64,
    pub source: BoundSource,
    pub log_base: Option<LogBase>,
    /// Set when the value is a per-level minimum with the trivial `1/s_i`.
    pub per_level_min: bool,
    pub inputs: String,
}

impl BoundReport {
    fn new(value: f64, source: BoundSource, log_base: Option<LogBase>, inputs: String) -> Self {
        BoundReport { value, source, log_base, per_level_min: false, inputs }
    }
}

fn check_probability(p: f64) -> Result<(), BoundError> {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return Err(BoundError::DomainError(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn check_mu(mu: usize) -> Result<(), BoundError> {
    if mu == 0 {
        return Err(BoundError::DomainError("island count must be at least 1".into()));
    }
    Ok(())
}

/// `Σ 1/s_i`: expected time of an elitist algorithm on one island.
pub fn seq_fitness_level_bound(s: &[f64]) -> Result<f64, BoundError> {
    if s.iter().any(|&x| x.is_nan() || x <= 0.0) {
        return Err(BoundError::ZeroSuccessProbability);
    }
    Ok(s.iter().map(|&x| 1.0 / x).sum())
}

/// `Σ_i Σ_{t≥0} (1-s_i)^{S_t}` where `S_t` is the cumulative number of
/// informed islands, with `mu_seq(j)` islands in generation `j ≥ 1`.
///
/// With `tau > 1` the exponent is `τ · Σ_{j=1}^{⌊t/τ⌋} μ_{(j-1)τ+1}`.
/// Summation stops once a term drops below `epsilon`; the rest is added as a
/// geometric tail whose ratio uses the latest `μ_j`, which is exact for
/// constant sequences and an overestimate for growing ones.
pub fn general_parallel_bound<F>(s: &[f64], mu_seq: F, tau: u64, epsilon: f64) -> Result<f64, BoundError>
where
    F: Fn(u64) -> f64,
{
    if tau == 0 {
        return Err(BoundError::DomainError("migration interval must be at least 1".into()));
    }
    if !(epsilon > 0.0) {
        return Err(BoundError::DomainError("epsilon must be positive".into()));
    }
    let tau_f = tau as f64;
    let mut total = 0.0;
    for &si in s {
        if si.is_nan() || si <= 0.0 || si > 1.0 {
            return Err(BoundError::NonConvergent);
        }
        let ln_fail = (-si).ln_1p();
        let mut exponent = 0.0;
        let mut block = 0u64;
        loop {
            let term = tau_f * (exponent * ln_fail).exp();
            total += term;
            let mu = mu_seq(block * tau + 1);
            if !(mu >= 1.0) {
                return Err(BoundError::DomainError(format!("island count {mu} below 1")));
            }
            if term < epsilon {
                let ratio = (tau_f * mu * ln_fail).exp();
                total += term * ratio / (1.0 - ratio);
                break;
            }
            exponent += tau_f * mu;
            block += 1;
            if block > MAX_BLOCKS {
                return Err(BoundError::NonConvergent);
            }
        }
    }
    Ok(total)
}

/// Expected time to leave a level once `k` islands are on it:
/// `E[T(k)] + 1 + 1/(k s)`.
pub fn level_time_bound(expected_tk: f64, k: usize, s: f64) -> Result<f64, BoundError> {
    if k == 0 || !(s > 0.0 && s <= 1.0) || !(expected_tk >= 0.0) {
        return Err(BoundError::DomainError(format!("k={k}, s={s}, E[T(k)]={expected_tk}")));
    }
    Ok(expected_tk + 1.0 + 1.0 / (k as f64 * s))
}

struct LevelSums {
    inv: f64,
    inv_sqrt: f64,
    inv_cbrt: f64,
    log2_inv: f64,
}

impl LevelSums {
    fn of(part: &LevelPartition) -> Self {
        let s = part.s();
        LevelSums {
            inv: s.iter().map(|x| 1.0 / x).sum(),
            inv_sqrt: s.iter().map(|x| x.powf(-0.5)).sum(),
            inv_cbrt: s.iter().map(|x| x.powf(-1.0 / 3.0)).sum(),
            log2_inv: s.iter().map(|x| -x.log2()).sum(),
        }
    }
}

fn torus_constant() -> f64 {
    3f64.powf(5.0 / 3.0)
}

fn inputs(kind: TopologyKind, part: &LevelPartition, mu: usize, p: f64) -> String {
    format!("kind={kind} m={} mu={mu} p={p}", part.m())
}

/// Expected parallel time bound for the given topology kind. Rings use the
/// strongly-connected bound; the complete graph uses the simple bound (see
/// [`complete_refined_bound`] for the refined one).
pub fn topology_bound(
    kind: TopologyKind,
    part: &LevelPartition,
    mu: usize,
    p: f64,
) -> Result<BoundReport, BoundError> {
    check_probability(p)?;
    check_mu(mu)?;
    let sums = LevelSums::of(part);
    let m = part.m() as f64;
    let mu_f = mu as f64;
    let parallel = sums.inv / mu_f;
    let (source, value, base) = match kind {
        TopologyKind::UniRing | TopologyKind::BiRing => {
            (BoundSource::Ring, 2.0 / p.sqrt() * sums.inv_sqrt + parallel, None)
        }
        TopologyKind::Torus => (
            BoundSource::Torus,
            torus_constant() / p.powf(2.0 / 3.0) * sums.inv_cbrt + parallel,
            None,
        ),
        TopologyKind::Hypercube => (
            BoundSource::Hypercube,
            (49.0 * m + 24.0 * sums.log2_inv) / p + parallel,
            Some(LogBase::Two),
        ),
        TopologyKind::Complete => (
            BoundSource::Complete,
            m + 2.0 * m / p + 2.0 * parallel,
            None,
        ),
    };
    let value = if p == 0.0 { f64::INFINITY } else { value };
    Ok(BoundReport::new(value, source, base, inputs(kind, part, mu, p)))
}

/// Refined complete-topology bound, with a regime change at `p = 1/μ`.
pub fn complete_refined_bound(part: &LevelPartition, mu: usize, p: f64) -> Result<BoundReport, BoundError> {
    check_probability(p)?;
    if mu < 2 {
        return Err(BoundError::DomainError("refined complete bound needs at least 2 islands".into()));
    }
    let m = part.m() as f64;
    let mu_f = mu as f64;
    let inv: f64 = part.s().iter().map(|x| 1.0 / x).sum();
    let value = if p == 0.0 {
        f64::INFINITY
    } else {
        m + 8.0 * m * mu_f.log2() * spread_factor(mu_f, p) + inv / mu_f
    };
    Ok(BoundReport::new(
        value,
        BoundSource::CompleteRefined,
        Some(LogBase::Two),
        inputs(TopologyKind::Complete, part, mu, p),
    ))
}

/// `1` when `p ≥ 1/μ`, else `1/(pμ)`.
fn spread_factor(mu: f64, p: f64) -> f64 {
    if p * mu >= 1.0 {
        1.0
    } else {
        1.0 / (p * mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropagationBound {
    /// Time until the `s_k` vertices within distance `k` of the source are
    /// informed on an undirected graph: `(c/(c-1)) · max{4k, 8 ln(c s_k)} / p`.
    Path { c: f64, k: usize, s_k: f64, p: f64 },
    /// Full propagation on the complete graph: `8 log μ / min(pμ, 1)`.
    Complete { mu: usize, p: f64 },
    /// Full propagation on an undirected graph: `8(diam + log n) / (p(1 - 1/e))`.
    Diameter { diameter: usize, n: usize, p: f64 },
}

impl PropagationBound {
    /// Path bound with `c = 2`, `k = diam(g)` and `s_k = μ`.
    pub fn path_for(g: &TopologyGraph, p: f64) -> Result<Self, BoundError> {
        let diameter = g.diameter().map_err(|e| BoundError::DomainError(e.to_string()))?;
        Ok(PropagationBound::Path { c: 2.0, k: diameter, s_k: g.num_vertices() as f64, p })
    }

    pub fn diameter_for(g: &TopologyGraph, p: f64) -> Result<Self, BoundError> {
        if !g.kind().is_undirected() {
            return Err(BoundError::UnsupportedKind(g.kind()));
        }
        let diameter = g.diameter().map_err(|e| BoundError::DomainError(e.to_string()))?;
        Ok(PropagationBound::Diameter { diameter, n: g.num_vertices(), p })
    }
}

pub fn propagation_time_bound(bound: PropagationBound) -> Result<BoundReport, BoundError> {
    let positive_p = |p: f64| {
        if p.is_nan() || p <= 0.0 || p > 1.0 {
            Err(BoundError::DomainError(format!("probability {p} outside (0, 1]")))
        } else {
            Ok(())
        }
    };
    match bound {
        PropagationBound::Path { c, k, s_k, p } => {
            positive_p(p)?;
            if !(c > 1.0) || k == 0 || !(s_k >= 1.0) {
                return Err(BoundError::DomainError(format!("c={c}, k={k}, s_k={s_k}")));
            }
            let value = c / (c - 1.0) * (4.0 * k as f64).max(8.0 * (c * s_k).ln()) / p;
            Ok(BoundReport::new(
                value,
                BoundSource::PropagationPath,
                Some(LogBase::Natural),
                format!("c={c} k={k} s_k={s_k} p={p}"),
            ))
        }
        PropagationBound::Complete { mu, p } => {
            positive_p(p)?;
            check_mu(mu)?;
            let mu_f = mu as f64;
            let value = 8.0 * mu_f.log2() / (p * mu_f).min(1.0);
            Ok(BoundReport::new(
                value,
                BoundSource::PropagationComplete,
                Some(LogBase::Two),
                format!("mu={mu} p={p}"),
            ))
        }
        PropagationBound::Diameter { diameter, n, p } => {
            positive_p(p)?;
            check_mu(n)?;
            let value = 8.0 * (diameter as f64 + (n as f64).log2()) / (p * (1.0 - 1.0 / E));
            Ok(BoundReport::new(
                value,
                BoundSource::PropagationDiameter,
                Some(LogBase::Two),
                format!("diam={diameter} n={n} p={p}"),
            ))
        }
    }
}

/// Factor by which expected communication exceeds expected parallel time:
/// `2pμ` (rings), `4pμ` (torus), `pμ log μ` (hypercube), `pμ²` (complete).
pub fn communication_factor(kind: TopologyKind, mu: usize, p: f64) -> Result<f64, BoundError> {
    check_probability(p)?;
    check_mu(mu)?;
    let mu = mu as f64;
    Ok(match kind {
        TopologyKind::UniRing | TopologyKind::BiRing => 2.0 * p * mu,
        TopologyKind::Torus => 4.0 * p * mu,
        TopologyKind::Hypercube => p * mu * mu.log2(),
        TopologyKind::Complete => p * mu * mu,
    })
}

/// Upper bound on expected communication effort: factor × topology bound.
pub fn communication_bound(
    kind: TopologyKind,
    part: &LevelPartition,
    mu: usize,
    p: f64,
) -> Result<BoundReport, BoundError> {
    let factor = communication_factor(kind, mu, p)?;
    let time = topology_bound(kind, part, mu, p)?;
    let value = if factor == 0.0 { 0.0 } else { factor * time.value };
    Ok(BoundReport::new(
        value,
        BoundSource::Communication,
        time.log_base,
        format!("{} factor={factor}", time.inputs),
    ))
}

/// Per-level costs whose sum (plus a level-independent remainder) is the
/// corresponding topology bound.
fn level_costs(kind: TopologyKind, s: f64, mu: usize, p: f64) -> Vec<f64> {
    let mu_f = mu as f64;
    let ring = 2.0 / (p * s).sqrt() + 1.0 / (mu_f * s);
    let mut costs = vec![ring];
    match kind {
        TopologyKind::UniRing | TopologyKind::BiRing => {}
        TopologyKind::Torus => {
            costs.push(torus_constant() / (p.powf(2.0 / 3.0) * s.cbrt()) + 1.0 / (mu_f * s));
        }
        TopologyKind::Hypercube => {
            costs.push((49.0 + 24.0 * (1.0 / s).log2()) / p + 1.0 / (mu_f * s));
        }
        TopologyKind::Complete => {
            costs.push(1.0 + 2.0 / p + 2.0 / (mu_f * s));
            if mu >= 2 {
                costs.push(1.0 + 8.0 * mu_f.log2() * spread_factor(mu_f, p) + 1.0 / (mu_f * s));
            }
        }
    }
    costs
}

/// Sum over levels of the smallest applicable per-level cost: the trivial
/// `1/s_i`, the ring cost (valid for any strongly connected graph) and the
/// kind-specific costs. Never exceeds [`topology_bound`] or
/// [`seq_fitness_level_bound`]; equals the latter at `p = 0`.
pub fn best_bound(
    kind: TopologyKind,
    part: &LevelPartition,
    mu: usize,
    p: f64,
) -> Result<BoundReport, BoundError> {
    let reference = topology_bound(kind, part, mu, p)?;
    let value = part
        .s()
        .iter()
        .map(|&s| {
            let trivial = 1.0 / s;
            if p == 0.0 {
                trivial
            } else {
                level_costs(kind, s, mu, p).into_iter().fold(trivial, f64::min)
            }
        })
        .sum();
    Ok(BoundReport { value, per_level_min: true, ..reference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Objective;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn lo4() -> LevelPartition {
        Objective::leading_ones(4).unwrap().canonical_partition()
    }

    fn unit() -> LevelPartition {
        LevelPartition::from_probabilities(vec![1.0]).unwrap()
    }

    #[test]
    fn seq_examples() {
        assert_eq!(seq_fitness_level_bound(&[1.0]).unwrap(), 1.0);
        let om = Objective::onemax(4).unwrap().canonical_partition();
        assert_close(seq_fitness_level_bound(om.s()).unwrap(), 25.0 * E / 3.0, 1e-9);
        assert_close(seq_fitness_level_bound(lo4().s()).unwrap(), 16.0 * E, 1e-9);
        assert_eq!(seq_fitness_level_bound(&[0.5, 0.0]), Err(BoundError::ZeroSuccessProbability));
    }

    #[test]
    fn general_parallel_examples() {
        let v = general_parallel_bound(&[0.5], |_| 1.0, 1, DEFAULT_EPSILON).unwrap();
        assert_close(v, 2.0, 1e-12);
        let v = general_parallel_bound(&[0.5], |_| 4.0, 1, DEFAULT_EPSILON).unwrap();
        assert_close(v, 16.0 / 15.0, 1e-12);
        assert_eq!(
            general_parallel_bound(&[0.0], |_| 1.0, 1, DEFAULT_EPSILON),
            Err(BoundError::NonConvergent)
        );
    }

    #[test]
    fn general_parallel_with_interval() {
        // tau = 2, constant mu = 1, s = 0.5: blocks of two equal terms, ratio 1/4.
        let v = general_parallel_bound(&[0.5], |_| 1.0, 2, DEFAULT_EPSILON).unwrap();
        assert_close(v, 2.0 / (1.0 - 0.25), 1e-12);
    }

    #[test]
    fn general_parallel_growing_sequence_brute_force() {
        // mu_j = min(j, 5), s = 0.2; compare with a long direct summation.
        let s: f64 = 0.2;
        let mu = |j: u64| (j as f64).min(5.0);
        let mut direct = 0.0;
        let mut cumulative = 0.0;
        for t in 0..5_000u64 {
            direct += (1.0 - s).powf(cumulative);
            cumulative += mu(t + 1);
        }
        let v = general_parallel_bound(&[s], mu, 1, DEFAULT_EPSILON).unwrap();
        assert_close(v, direct, 1e-10);
    }

    #[test]
    fn level_time_examples() {
        assert_eq!(level_time_bound(0.0, 1, 0.5).unwrap(), 3.0);
        assert_eq!(level_time_bound(10.0, 4, 0.25).unwrap(), 12.0);
        assert_eq!(level_time_bound(3.0, 1, 1.0).unwrap(), 5.0);
        assert!(level_time_bound(1.0, 0, 0.5).is_err());
    }

    #[test]
    fn topology_examples() {
        let r = topology_bound(TopologyKind::UniRing, &unit(), 1, 1.0).unwrap();
        assert_eq!(r.value, 3.0);
        assert_eq!(r.source, BoundSource::Ring);
        let ring = topology_bound(TopologyKind::BiRing, &lo4(), 4, 1.0).unwrap().value;
        assert_close(ring, 8.0 * (4.0 * E).sqrt() + 4.0 * E, 1e-9);
        assert_close(ring, 37.252, 1e-3);
        let complete = topology_bound(TopologyKind::Complete, &lo4(), 4, 1.0).unwrap().value;
        assert_close(complete, 15.0 + 8.0 * E, 1e-9);
        let torus = topology_bound(TopologyKind::Torus, &lo4(), 4, 1.0).unwrap().value;
        assert_close(torus, 3f64.powf(5.0 / 3.0) * 4.0 * (4.0 * E).cbrt() + 4.0 * E, 1e-9);
        assert_close(torus, 66.18, 0.01);
        let cube = topology_bound(TopologyKind::Hypercube, &lo4(), 4, 1.0).unwrap();
        assert_close(cube.value, 49.0 * 5.0 + 24.0 * 4.0 * (4.0 * E).log2() + 4.0 * E, 1e-9);
        assert_eq!(cube.log_base, Some(LogBase::Two));
    }

    #[test]
    fn topology_domain() {
        assert!(topology_bound(TopologyKind::Complete, &lo4(), 4, 1.5).is_err());
        assert!(topology_bound(TopologyKind::Complete, &lo4(), 0, 0.5).is_err());
        assert!(topology_bound(TopologyKind::Complete, &lo4(), 4, f64::NAN).is_err());
        for kind in TopologyKind::ALL {
            assert_eq!(topology_bound(kind, &lo4(), 4, 0.0).unwrap().value, f64::INFINITY);
        }
    }

    #[test]
    fn complete_refined_examples() {
        assert_close(complete_refined_bound(&unit(), 2, 1.0).unwrap().value, 18.5, 1e-12);
        assert_close(complete_refined_bound(&unit(), 4, 0.125).unwrap().value, 66.25, 1e-12);
        let at = complete_refined_bound(&lo4(), 8, 0.125).unwrap().value;
        let m = 5.0;
        let inv = 16.0 * E;
        let high = m + 8.0 * m * 3.0 + inv / 8.0;
        let low = m + 8.0 * m * 3.0 / (0.125 * 8.0) + inv / 8.0;
        assert_close(at, high, 1e-9);
        assert_close(at, low, 1e-9);
        assert!(complete_refined_bound(&unit(), 1, 0.5).is_err());
    }

    #[test]
    fn propagation_examples() {
        let v = |b| propagation_time_bound(b).unwrap().value;
        assert_close(v(PropagationBound::Complete { mu: 64, p: 1.0 }), 48.0, 1e-12);
        assert_close(v(PropagationBound::Complete { mu: 64, p: 1.0 / 128.0 }), 96.0, 1e-12);
        assert_close(v(PropagationBound::Diameter { diameter: 6, n: 64, p: 1.0 }), 96.0 / (1.0 - (-1f64).exp()), 1e-9);
        assert_close(v(PropagationBound::Diameter { diameter: 6, n: 64, p: 1.0 }), 151.87, 0.01);
        // c = 2, k = 3, s_k = 8: max{12, 8 ln 16} = 22.18; doubled.
        assert_close(v(PropagationBound::Path { c: 2.0, k: 3, s_k: 8.0, p: 1.0 }), 2.0 * 8.0 * 16f64.ln(), 1e-12);
        assert_close(v(PropagationBound::Path { c: 2.0, k: 20, s_k: 8.0, p: 0.5 }), 2.0 * 80.0 / 0.5, 1e-12);
        assert!(propagation_time_bound(PropagationBound::Path { c: 1.0, k: 3, s_k: 8.0, p: 1.0 }).is_err());
        assert!(propagation_time_bound(PropagationBound::Complete { mu: 8, p: 0.0 }).is_err());
    }

    #[test]
    fn communication_examples() {
        assert_eq!(communication_factor(TopologyKind::BiRing, 16, 0.5).unwrap(), 16.0);
        assert_eq!(communication_factor(TopologyKind::Complete, 8, 1.0).unwrap(), 64.0);
        assert_eq!(communication_factor(TopologyKind::Hypercube, 8, 1.0).unwrap(), 24.0);
        assert_eq!(communication_factor(TopologyKind::Torus, 9, 0.5).unwrap(), 18.0);
        assert_eq!(communication_bound(TopologyKind::Torus, &lo4(), 9, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn best_bound_examples() {
        let best = best_bound(TopologyKind::BiRing, &lo4(), 4, 1.0).unwrap();
        assert!(best.per_level_min);
        assert_close(best.value, 8.0 * (4.0 * E).sqrt() + 4.0 * E, 1e-9);
        let seq = seq_fitness_level_bound(lo4().s()).unwrap();
        assert_eq!(best_bound(TopologyKind::Torus, &lo4(), 9, 0.0).unwrap().value, seq);
        let tiny = best_bound(TopologyKind::Complete, &lo4(), 4, 1e-12).unwrap().value;
        assert_close(tiny, seq, 1e-9);
    }

    #[test]
    fn best_bound_dominated_everywhere() {
        let parts = [
            lo4(),
            Objective::onemax(16).unwrap().canonical_partition(),
            Objective::jump(3, 12).unwrap().canonical_partition(),
        ];
        for part in &parts {
            let seq = seq_fitness_level_bound(part.s()).unwrap();
            for kind in TopologyKind::ALL {
                for mu in [1usize, 2, 4, 16, 64] {
                    for p in [0.0, 0.01, 0.1, 0.5, 1.0] {
                        let best = best_bound(kind, part, mu, p).unwrap().value;
                        let top = topology_bound(kind, part, mu, p).unwrap().value;
                        assert!(best <= top * (1.0 + 1e-12), "{kind} mu={mu} p={p}");
                        assert!(best <= seq * (1.0 + 1e-12));
                    }
                }
            }
        }
    }
}
