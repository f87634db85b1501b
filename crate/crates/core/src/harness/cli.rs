//! Command-line interface. Exit codes: 0 ok, 1 usage or config error,
//! 2 bound violation found by `audit`.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use super::audit::audit_bounds;
use super::config::{ExperimentSpec, FileConfig};
use super::experiment::{read_summaries, run_experiment, write_csv, write_csv_file, write_outputs, ExperimentResult};
use super::presets;
use super::stats::Summary;
use super::HarnessError;
use crate::bounds::{
    best_bound, communication_bound, complete_refined_bound, propagation_time_bound, seq_fitness_level_bound,
    topology_bound, BoundReport, PropagationBound,
};
use crate::island_model::{run, ModelConfig};
use crate::objective::Objective;
use crate::oracle::{expected_parallel_time, Lumping, OracleOptions, DEFAULT_STATE_CAP};
use crate::propagation::run_hitting_times;
use crate::rng;
use crate::topology::{TopologyGraph, TopologyKind, TopologySpec};

#[derive(Debug, Parser)]
#[command(name = "parallel-ea", version, about = "Island-model parallel (1+1) EA experiments and runtime bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one replication and print its per-run record.
    Run(PointArgs),
    /// Run a replicated sweep; writes runs.csv, summary.csv and plot.csv to --out.
    Sweep(PointArgs),
    /// Print every bound for one configuration.
    Bounds(BoundsArgs),
    /// Sample propagation hitting times T(k).
    Propagate(PropagateArgs),
    /// Exact expected t_par next to a Monte Carlo estimate.
    Oracle(OracleArgs),
    /// Check empirical means against the bounds (exit 2 on violation).
    Audit(AuditArgs),
    /// Run a named preset (fig1-desk, fig2-desk, fig1-paper).
    Preset(PresetArgs),
}

/// Sweep flags; list-valued flags take comma-separated values and override
/// the config file.
#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// onemax | lo | jump:k | custom:trailingones
    #[arg(long, value_delimiter = ',')]
    pub function: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub mu: Vec<usize>,
    /// uniring | biring | torus | torus:WxH | hypercube | complete
    #[arg(long, value_delimiter = ',')]
    pub topology: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub tau: Vec<u64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub fixed_start: Option<String>,
}

impl PointArgs {
    pub fn to_spec(&self) -> Result<ExperimentSpec, HarnessError> {
        let mut spec = ExperimentSpec::default();
        if let Some(path) = &self.config {
            FileConfig::load(path)?.apply(&mut spec)?;
        }
        let axes = &mut spec.axes;
        let set = |target: &mut Vec<String>, v: &Vec<String>| {
            if !v.is_empty() {
                *target = v.clone();
            }
        };
        set(&mut axes.functions, &self.function);
        set(&mut axes.topologies, &self.topology);
        if !self.n.is_empty() {
            axes.n = self.n.clone();
        }
        if !self.mu.is_empty() {
            axes.mu = self.mu.clone();
        }
        if !self.p.is_empty() {
            axes.p = self.p.clone();
        }
        if !self.tau.is_empty() {
            axes.tau = self.tau.clone();
        }
        if let Some(v) = self.reps {
            spec.reps = v;
        }
        if let Some(v) = self.seed {
            spec.base_seed = v;
        }
        if let Some(v) = self.budget {
            spec.budget = v;
        }
        if let Some(v) = &self.out {
            spec.out = Some(v.clone());
        }
        if let Some(v) = &self.fixed_start {
            spec.fixed_start = Some(v.parse()?);
        }
        spec.validate()?;
        Ok(spec)
    }

    /// The single configuration named by the flags (first value of each axis).
    fn single(&self) -> Result<(ExperimentSpec, ModelConfig), HarnessError> {
        let spec = self.to_spec()?;
        let a = &spec.axes;
        let objective = Objective::parse(&a.functions[0], a.n[0])?;
        let graph = TopologyGraph::build(TopologySpec::resolve(&a.topologies[0], a.mu[0])?)?;
        let mut cfg = ModelConfig::new(objective, Arc::new(graph))
            .with_p(a.p[0])
            .with_tau(a.tau[0])
            .with_seed(spec.base_seed)
            .with_budget(spec.budget);
        if let Some(start) = &spec.fixed_start {
            cfg = cfg.with_fixed_start(start.clone());
        }
        cfg.validate()?;
        Ok((spec, cfg))
    }
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value = "onemax")]
    pub function: String,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub mu: usize,
    #[arg(long, default_value = "complete")]
    pub topology: String,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PropagateArgs {
    #[arg(long, value_delimiter = ',', default_value = "complete")]
    pub topology: Vec<String>,
    #[arg(long, default_value_t = 16)]
    pub mu: usize,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub source: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    /// CSV file to write instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Monte Carlo replications for the comparison estimate.
    #[arg(long, default_value_t = 10_000)]
    pub mc_runs: usize,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
    /// auto | bitstrings | onemax-counts
    #[arg(long, default_value = "auto")]
    pub lumping: String,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Audit an existing summary.csv instead of running a sweep.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PresetArgs {
    pub name: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, HarnessError> {
    match command {
        Command::Run(args) => {
            let (_, cfg) = args.single()?;
            let outcome = run(&cfg)?;
            let topo = cfg.topology.spec();
            let record = super::experiment::RunRecord {
                function: cfg.objective.label(),
                n: cfg.objective.n(),
                mu: cfg.mu(),
                topology: topo.kind().name().into(),
                topo_params: topo.params_label(),
                p: cfg.p,
                tau: cfg.tau,
                rep: 0,
                seed: cfg.seed,
                t_par: outcome.t_par,
                t_seq: outcome.t_seq,
                t_com: outcome.t_com,
                success: outcome.success,
                best_fitness: outcome.best_fitness,
            };
            write_csv(out, &[record])?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let spec = args.to_spec()?;
            let result = run_experiment(&spec)?;
            emit(&spec, &result, out, err)?;
            Ok(0)
        }
        Command::Preset(args) => {
            let mut spec = presets::preset(&args.name)?;
            if let Some(r) = args.reps {
                spec.reps = r;
            }
            if let Some(s) = args.seed {
                spec.base_seed = s;
            }
            spec.out = args.out;
            let result = run_experiment(&spec)?;
            emit(&spec, &result, out, err)?;
            Ok(0)
        }
        Command::Bounds(args) => bounds(&args, out),
        Command::Propagate(args) => propagate(&args, out),
        Command::Oracle(args) => oracle(&args, out),
        Command::Audit(args) => {
            let rows = match &args.summary {
                Some(path) => read_summaries(path)?,
                None => {
                    let spec = args.point.to_spec()?;
                    let result = run_experiment(&spec)?;
                    if let Some(dir) = &spec.out {
                        write_outputs(dir, &result)?;
                    }
                    result.summaries
                }
            };
            let report = audit_bounds(&rows)?;
            write_csv(&mut *out, &report.entries)?;
            if let Some(dir) = &args.point.out {
                std::fs::create_dir_all(dir)?;
                write_csv_file(&dir.join("audit.csv"), &report.entries)?;
            }
            let violations = report.violations().count();
            writeln!(err, "{} points audited, {violations} violations", report.entries.len())?;
            Ok(report.exit_code())
        }
    }
}

fn emit(spec: &ExperimentSpec, result: &ExperimentResult, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), HarnessError> {
    for s in &result.skipped {
        writeln!(err, "skipped {} n={} mu={} {}: {}", s.function, s.n, s.mu, s.topology, s.reason)?;
    }
    match &spec.out {
        Some(dir) => {
            write_outputs(dir, result)?;
            writeln!(
                err,
                "wrote {} runs and {} summary rows to {}",
                result.records.len(),
                result.summaries.len(),
                dir.display()
            )?;
        }
        None => write_csv(out, &result.summaries)?,
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct BoundLine {
    bound: &'static str,
    value: f64,
    log_base: &'static str,
    inputs: String,
}

impl BoundLine {
    fn from(bound: &'static str, r: BoundReport) -> Self {
        BoundLine { bound, value: r.value, log_base: r.log_base.map_or("", |b| b.label()), inputs: r.inputs }
    }
}

fn bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let objective = Objective::parse(&args.function, args.n)?;
    let part = objective.canonical_partition();
    let spec = TopologySpec::resolve(&args.topology, args.mu)?;
    let graph = TopologyGraph::build(spec)?;
    let kind = spec.kind();
    let mut lines = vec![BoundLine {
        bound: "seq_fitness_level",
        value: seq_fitness_level_bound(part.s())?,
        log_base: "",
        inputs: format!("m={}", part.m()),
    }];
    lines.push(BoundLine::from("topology", topology_bound(kind, &part, args.mu, args.p)?));
    if kind == TopologyKind::Complete && args.mu >= 2 {
        lines.push(BoundLine::from("complete_refined", complete_refined_bound(&part, args.mu, args.p)?));
    }
    lines.push(BoundLine::from("best", best_bound(kind, &part, args.mu, args.p)?));
    lines.push(BoundLine::from("communication", communication_bound(kind, &part, args.mu, args.p)?));
    if args.p > 0.0 && args.mu > 1 {
        if kind.is_undirected() {
            lines.push(BoundLine::from("propagation_path", propagation_time_bound(PropagationBound::path_for(&graph, args.p)?)?));
            lines.push(BoundLine::from(
                "propagation_diameter",
                propagation_time_bound(PropagationBound::diameter_for(&graph, args.p)?)?,
            ));
        }
        if kind == TopologyKind::Complete {
            lines.push(BoundLine::from(
                "propagation_complete",
                propagation_time_bound(PropagationBound::Complete { mu: args.mu, p: args.p })?,
            ));
        }
    }
    write_csv(out, &lines)?;
    Ok(0)
}

#[derive(serde::Serialize)]
struct HittingRow {
    topology: String,
    topo_params: String,
    p: f64,
    rep: usize,
    seed: u64,
    k: usize,
    t_k: Option<u64>,
}

fn propagate(args: &PropagateArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let mut rows = Vec::new();
    let mut point = 0u64;
    for text in &args.topology {
        let spec = TopologySpec::resolve(text, args.mu)?;
        let graph = TopologyGraph::build(spec)?;
        for &p in &args.p {
            for rep in 0..args.reps {
                let seed = rng::split(args.seed, &[point, rep as u64]);
                let mut stream = rng::stream(seed, &[]);
                let times = run_hitting_times(&graph, p, args.source, args.budget, &mut stream)?;
                rows.extend(times.iter().map(|(k, t_k)| HittingRow {
                    topology: spec.kind().name().into(),
                    topo_params: spec.params_label(),
                    p,
                    rep,
                    seed,
                    k,
                    t_k,
                }));
            }
            point += 1;
        }
    }
    match &args.out {
        Some(path) => write_csv_file(path, &rows)?,
        None => write_csv(out, &rows)?,
    }
    Ok(0)
}

#[derive(serde::Serialize)]
struct OracleLine {
    exact: f64,
    mc_mean: f64,
    mc_ci99: f64,
    mc_runs: usize,
}

fn oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let (spec, cfg) = args.point.single()?;
    let lumping = match args.lumping.as_str() {
        "auto" => Lumping::Auto,
        "bitstrings" => Lumping::Bitstrings,
        "onemax-counts" => Lumping::OneMaxCounts,
        other => return Err(HarnessError::Config(format!("unknown lumping '{other}'"))),
    };
    let exact = expected_parallel_time(&cfg, OracleOptions { state_cap: args.state_cap, lumping })?;
    let samples = (0..args.mc_runs)
        .map(|rep| {
            let seed = rng::split(spec.base_seed, &[0, rep as u64]);
            run(&cfg.clone().with_seed(seed)).map(|o| o.t_par)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mc = Summary::of_u64(samples);
    write_csv(out, &[OracleLine { exact, mc_mean: mc.mean, mc_ci99: mc.ci99, mc_runs: args.mc_runs }])?;
    Ok(0)
}
