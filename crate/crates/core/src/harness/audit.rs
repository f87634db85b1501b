//! Empirical means against analytic upper bounds.
//!
//! A point violates its bound when `mean - CI99 > bound`. With `τ > 1` the
//! topology bounds do not apply and the point is held to the single-island
//! bound, which covers any elitist island model.

use serde::Serialize;

use super::experiment::SummaryRow;
use super::HarnessError;
use crate::bounds::{best_bound, seq_fitness_level_bound, BoundError, BoundReport, BoundSource};
use crate::objective::Objective;
use crate::topology::TopologyKind;

/// Bound a sweep point is held to.
pub fn point_bound(
    objective: &Objective,
    kind: TopologyKind,
    mu: usize,
    p: f64,
    tau: u64,
) -> Result<BoundReport, BoundError> {
    let part = objective.canonical_partition();
    if tau > 1 {
        let value = seq_fitness_level_bound(part.s())?;
        return Ok(BoundReport {
            value,
            source: BoundSource::SeqFitnessLevel,
            log_base: None,
            per_level_min: false,
            inputs: format!("m={} tau={tau}", part.m()),
        });
    }
    best_bound(kind, &part, mu, p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntry {
    pub function: String,
    pub n: usize,
    pub mu: usize,
    pub topology: String,
    pub topo_params: String,
    pub p: f64,
    pub tau: u64,
    pub reps: usize,
    pub mean: f64,
    pub ci99: f64,
    pub bound: f64,
    pub source: String,
    pub violation: bool,
}

#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn violations(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| e.violation)
    }

    pub fn has_violation(&self) -> bool {
        self.violations().next().is_some()
    }

    /// Process exit status: 0 when clean, 2 on any violation.
    pub fn exit_code(&self) -> i32 {
        if self.has_violation() {
            2
        } else {
            0
        }
    }
}

/// Recomputes each row's bound from its metadata and flags violations.
pub fn audit_bounds(rows: &[SummaryRow]) -> Result<AuditReport, HarnessError> {
    let entries = rows
        .iter()
        .map(|row| {
            let objective = Objective::parse(&row.function, row.n)?;
            let kind: TopologyKind = row.topology.parse()?;
            let bound = point_bound(&objective, kind, row.mu, row.p, row.tau)?;
            Ok(AuditEntry {
                function: row.function.clone(),
                n: row.n,
                mu: row.mu,
                topology: row.topology.clone(),
                topo_params: row.topo_params.clone(),
                p: row.p,
                tau: row.tau,
                reps: row.reps,
                mean: row.t_par_mean,
                ci99: row.t_par_ci99,
                bound: bound.value,
                source: bound.source.label().to_string(),
                violation: row.t_par_mean - row.t_par_ci99 > bound.value,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(AuditReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{ExperimentSpec, SweepAxes};
    use crate::harness::experiment::run_experiment;

    fn small() -> Vec<SummaryRow> {
        let spec = ExperimentSpec {
            axes: SweepAxes {
                functions: vec!["lo".into()],
                n: vec![8],
                mu: vec![1, 4],
                topologies: vec!["complete".into()],
                p: vec![0.0, 1.0],
                tau: vec![1, 3],
            },
            reps: 50,
            ..ExperimentSpec::default()
        };
        run_experiment(&spec).unwrap().summaries
    }

    #[test]
    fn clean_sweep_passes() {
        let rows = small();
        let report = audit_bounds(&rows).unwrap();
        assert_eq!(report.exit_code(), 0);
        assert!(report.entries.iter().filter(|e| e.tau == 3).all(|e| e.source == "seq_fitness_level"));
        let zero = report.entries.iter().find(|e| e.p == 0.0 && e.tau == 1).unwrap();
        let seq = seq_fitness_level_bound(Objective::leading_ones(8).unwrap().canonical_partition().s()).unwrap();
        assert_eq!(zero.bound, seq);
    }

    #[test]
    fn inflated_means_are_flagged() {
        let mut rows = small();
        for row in &mut rows {
            row.t_par_mean *= 100.0;
        }
        let report = audit_bounds(&rows).unwrap();
        assert_eq!(report.exit_code(), 2);
    }
}
