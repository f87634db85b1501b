//! Replicated sweeps and CSV emission.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::audit::point_bound;
use super::config::{ExperimentSpec, SkippedPoint, SweepPoint};
use super::stats::{speedup_efficiency, Summary};
use super::HarnessError;
use crate::bounds::seq_fitness_level_bound;
use crate::island_model::run;
use crate::rng;

/// One replication, in the per-run CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub function: String,
    pub n: usize,
    pub mu: usize,
    pub topology: String,
    pub topo_params: String,
    pub p: f64,
    pub tau: u64,
    pub rep: usize,
    pub seed: u64,
    pub t_par: u64,
    pub t_seq: u64,
    pub t_com: u64,
    pub success: bool,
    pub best_fitness: i64,
}

/// Per-point statistics. `speedup` and `efficiency` use the mean `t_par` of
/// the matching `μ = 1` point as the single-island time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub function: String,
    pub n: usize,
    pub mu: usize,
    pub topology: String,
    pub topo_params: String,
    pub p: f64,
    pub tau: u64,
    pub reps: usize,
    pub success_rate: f64,
    pub t_par_mean: f64,
    pub t_par_std: f64,
    pub t_par_ci95: f64,
    pub t_par_ci99: f64,
    pub t_seq_mean: f64,
    pub t_seq_std: f64,
    pub t_seq_ci95: f64,
    pub t_seq_ci99: f64,
    pub t_com_mean: f64,
    pub t_com_std: f64,
    pub t_com_ci95: f64,
    pub t_com_ci99: f64,
    pub baseline_t_par: Option<f64>,
    pub speedup: Option<f64>,
    pub efficiency: Option<f64>,
    pub efficiency_ci99: Option<f64>,
    pub bound: f64,
    pub bound_source: String,
    pub seq_bound: f64,
    pub violation: bool,
}

impl SummaryRow {
    pub fn t_par(&self) -> Summary {
        Summary {
            count: self.reps,
            mean: self.t_par_mean,
            std: self.t_par_std,
            ci95: self.t_par_ci95,
            ci99: self.t_par_ci99,
        }
    }

    /// Efficiency as a summary whose CI is the delta-method half-width.
    pub fn efficiency_summary(&self) -> Option<Summary> {
        Some(Summary {
            count: self.reps,
            mean: self.efficiency?,
            std: f64::NAN,
            ci95: f64::NAN,
            ci99: self.efficiency_ci99?,
        })
    }
}

/// Long-format plot data: one row per point per metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotRow {
    pub function: String,
    pub n: usize,
    pub mu: usize,
    pub topology: String,
    pub topo_params: String,
    pub p: f64,
    pub tau: u64,
    pub metric: &'static str,
    pub value: f64,
    pub ci99: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<RunRecord>,
    pub summaries: Vec<SummaryRow>,
    pub skipped: Vec<SkippedPoint>,
}

/// Replication seed: `split(base_seed, point_index, rep)`.
pub fn replication_seed(base_seed: u64, point: usize, rep: usize) -> u64 {
    rng::split(base_seed, &[point as u64, rep as u64])
}

fn run_one(spec: &ExperimentSpec, point: &SweepPoint, rep: usize) -> Result<RunRecord, HarnessError> {
    let seed = replication_seed(spec.base_seed, point.index, rep);
    let cfg = point.model_config(seed, spec.budget, spec.fixed_start.as_ref());
    let out = run(&cfg)?;
    let topo = point.topology.spec();
    Ok(RunRecord {
        function: point.function(),
        n: point.n(),
        mu: point.mu(),
        topology: topo.kind().name().to_string(),
        topo_params: topo.params_label(),
        p: point.p,
        tau: point.tau,
        rep,
        seed,
        t_par: out.t_par,
        t_seq: out.t_seq,
        t_com: out.t_com,
        success: out.success,
        best_fitness: out.best_fitness,
    })
}

/// Runs every replication of every point. Replications execute in parallel;
/// results are collected in (point, rep) order so output is deterministic.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult, HarnessError> {
    let (points, skipped) = spec.points()?;
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..spec.reps).map(move |r| (p, r)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(p, rep)| run_one(spec, &points[p], rep))
        .collect::<Result<Vec<_>, _>>()?;
    let summaries = summarize(&points, &records)?;
    Ok(ExperimentResult { records, summaries, skipped })
}

/// Per-point statistics, bound values and speedup/efficiency. `records`
/// holds the same number of replications for each point, in point order.
pub fn summarize(points: &[SweepPoint], records: &[RunRecord]) -> Result<Vec<SummaryRow>, HarnessError> {
    if points.is_empty() || records.len() % points.len() != 0 || records.is_empty() {
        return Err(HarnessError::Config("records do not cover the sweep points evenly".into()));
    }
    let reps = records.len() / points.len();
    let mut rows = points
        .iter()
        .zip(records.chunks(reps))
        .map(|(point, runs)| summary_row(point, runs))
        .collect::<Result<Vec<_>, _>>()?;
    attach_baselines(&mut rows);
    Ok(rows)
}

fn summary_row(point: &SweepPoint, runs: &[RunRecord]) -> Result<SummaryRow, HarnessError> {
    let t_par = Summary::of_u64(runs.iter().map(|r| r.t_par));
    let t_seq = Summary::of_u64(runs.iter().map(|r| r.t_seq));
    let t_com = Summary::of_u64(runs.iter().map(|r| r.t_com));
    let first = &runs[0];
    let bound = point_bound(&point.objective, point.topology.kind(), point.mu(), point.p, point.tau)?;
    let seq_bound = seq_fitness_level_bound(point.objective.canonical_partition().s())?;
    Ok(SummaryRow {
        function: first.function.clone(),
        n: first.n,
        mu: first.mu,
        topology: first.topology.clone(),
        topo_params: first.topo_params.clone(),
        p: first.p,
        tau: first.tau,
        reps: runs.len(),
        success_rate: runs.iter().filter(|r| r.success).count() as f64 / runs.len() as f64,
        t_par_mean: t_par.mean,
        t_par_std: t_par.std,
        t_par_ci95: t_par.ci95,
        t_par_ci99: t_par.ci99,
        t_seq_mean: t_seq.mean,
        t_seq_std: t_seq.std,
        t_seq_ci95: t_seq.ci95,
        t_seq_ci99: t_seq.ci99,
        t_com_mean: t_com.mean,
        t_com_std: t_com.std,
        t_com_ci95: t_com.ci95,
        t_com_ci99: t_com.ci99,
        baseline_t_par: None,
        speedup: None,
        efficiency: None,
        efficiency_ci99: None,
        bound: bound.value,
        bound_source: bound.source.label().to_string(),
        seq_bound,
        violation: t_par.lower99() > bound.value,
    })
}

/// Baseline for a row: the `μ = 1` row with the same function, `n`, `τ`, `p`
/// and topology; failing that any topology with the same `p`; failing that
/// any `p`.
fn attach_baselines(rows: &mut [SummaryRow]) {
    let singles: Vec<SummaryRow> = rows.iter().filter(|r| r.mu == 1).cloned().collect();
    for row in rows.iter_mut() {
        let base = singles.iter().filter(|b| b.function == row.function && b.n == row.n && b.tau == row.tau);
        let chosen = base
            .clone()
            .find(|b| b.p == row.p && b.topology == row.topology)
            .or_else(|| base.clone().find(|b| b.p == row.p))
            .or_else(|| base.clone().next());
        let Some(b) = chosen else { continue };
        let Ok((speedup, efficiency)) = speedup_efficiency(Some(b.t_par_mean), row.t_par_mean, row.mu) else {
            continue;
        };
        let rel = if row.mu == 1 {
            0.0
        } else {
            let rb = b.t_par_ci99 / b.t_par_mean;
            let rt = row.t_par_ci99 / row.t_par_mean;
            (rb * rb + rt * rt).sqrt()
        };
        row.baseline_t_par = Some(b.t_par_mean);
        row.speedup = Some(speedup);
        row.efficiency = Some(efficiency);
        row.efficiency_ci99 = Some(efficiency * rel);
    }
}

pub fn plot_rows(summaries: &[SummaryRow]) -> Vec<PlotRow> {
    let mut out = Vec::new();
    for s in summaries {
        let metrics: [(&'static str, Option<f64>, f64); 7] = [
            ("t_par", Some(s.t_par_mean), s.t_par_ci99),
            ("t_seq", Some(s.t_seq_mean), s.t_seq_ci99),
            ("t_com", Some(s.t_com_mean), s.t_com_ci99),
            ("success_rate", Some(s.success_rate), 0.0),
            ("speedup", s.speedup, f64::NAN),
            ("efficiency", s.efficiency, s.efficiency_ci99.unwrap_or(f64::NAN)),
            ("bound", Some(s.bound), 0.0),
        ];
        for (metric, value, ci99) in metrics {
            let Some(value) = value else { continue };
            out.push(PlotRow {
                function: s.function.clone(),
                n: s.n,
                mu: s.mu,
                topology: s.topology.clone(),
                topo_params: s.topo_params.clone(),
                p: s.p,
                tau: s.tau,
                metric,
                value,
                ci99,
            });
        }
    }
    out
}

pub fn write_csv<T: Serialize, W: std::io::Write>(writer: W, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    write_csv(fs::File::create(path)?, rows)
}

pub fn read_summaries(path: &Path) -> Result<Vec<SummaryRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(HarnessError::from)).collect()
}

/// Writes `runs.csv`, `summary.csv` and `plot.csv` into `dir`.
pub fn write_outputs(dir: &Path, result: &ExperimentResult) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    write_csv_file(&dir.join("runs.csv"), &result.records)?;
    write_csv_file(&dir.join("summary.csv"), &result.summaries)?;
    write_csv_file(&dir.join("plot.csv"), &plot_rows(&result.summaries))?;
    Ok(())
}
