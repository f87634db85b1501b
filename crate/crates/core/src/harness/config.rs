//! Experiment specifications and the flat TOML config file.
//!
//! A config file mirrors the CLI flags; every sweep axis takes either a
//! scalar or an array:
//!
//! ```toml
//! function = ["onemax", "lo"]
//! n = 64
//! mu = [1, 4, 16]
//! topology = ["biring", "complete"]
//! p = [0.1, 1.0]
//! reps = 100
//! seed = 7
//! ```

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use super::HarnessError;
use crate::island_model::{ModelConfig, DEFAULT_BUDGET};
use crate::objective::{BitString, Objective};
use crate::topology::{TopologyError, TopologyGraph, TopologySpec};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxes {
    pub functions: Vec<String>,
    pub n: Vec<usize>,
    pub mu: Vec<usize>,
    pub topologies: Vec<String>,
    pub p: Vec<f64>,
    pub tau: Vec<u64>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        SweepAxes {
            functions: vec!["onemax".into()],
            n: vec![16],
            mu: vec![4],
            topologies: vec!["complete".into()],
            p: vec![1.0],
            tau: vec![1],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub axes: SweepAxes,
    pub reps: usize,
    pub base_seed: u64,
    pub budget: u64,
    pub fixed_start: Option<BitString>,
    /// Output directory for `runs.csv`, `summary.csv` and `plot.csv`.
    pub out: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            axes: SweepAxes::default(),
            reps: 10,
            base_seed: 0,
            budget: DEFAULT_BUDGET,
            fixed_start: None,
            out: None,
        }
    }
}

/// One valid combination of axis values.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub index: usize,
    pub objective: Objective,
    pub topology: Arc<TopologyGraph>,
    pub p: f64,
    pub tau: u64,
}

impl SweepPoint {
    pub fn function(&self) -> String {
        self.objective.label()
    }

    pub fn n(&self) -> usize {
        self.objective.n()
    }

    pub fn mu(&self) -> usize {
        self.topology.num_vertices()
    }

    pub fn model_config(&self, seed: u64, budget: u64, fixed_start: Option<&BitString>) -> ModelConfig {
        let cfg = ModelConfig::new(self.objective.clone(), self.topology.clone())
            .with_p(self.p)
            .with_tau(self.tau)
            .with_seed(seed)
            .with_budget(budget);
        match fixed_start {
            Some(start) => cfg.with_fixed_start(start.clone()),
            None => cfg,
        }
    }
}

/// A grid combination that has no valid topology (e.g. a square torus on a
/// non-square island count).
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPoint {
    pub function: String,
    pub n: usize,
    pub mu: usize,
    pub topology: String,
    pub reason: String,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let a = &self.axes;
        if self.reps == 0 {
            return Err(HarnessError::Config("reps must be at least 1".into()));
        }
        if a.functions.is_empty() || a.n.is_empty() || a.mu.is_empty() || a.topologies.is_empty() || a.p.is_empty() || a.tau.is_empty() {
            return Err(HarnessError::Config("sweep axes must be non-empty".into()));
        }
        if let Some(p) = a.p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(HarnessError::Config(format!("p = {p} outside [0, 1]")));
        }
        if a.tau.contains(&0) {
            return Err(HarnessError::Config("tau must be at least 1".into()));
        }
        if a.n.contains(&0) || a.mu.contains(&0) {
            return Err(HarnessError::Config("n and mu must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(HarnessError::Config("budget must be at least 1".into()));
        }
        if let Some(start) = &self.fixed_start {
            if a.n.iter().any(|&n| n != start.len()) {
                return Err(HarnessError::Config(format!("fixed start has {} bits but n varies or differs", start.len())));
            }
        }
        Ok(())
    }

    /// Expands the grid in the order function × n × topology × μ × p × τ.
    pub fn points(&self) -> Result<(Vec<SweepPoint>, Vec<SkippedPoint>), HarnessError> {
        self.validate()?;
        let a = &self.axes;
        let mut points = Vec::new();
        let mut skipped = Vec::new();
        for function in &a.functions {
            for &n in &a.n {
                let objective = Objective::parse(function, n)?;
                for topology in &a.topologies {
                    for &mu in &a.mu {
                        let graph = match TopologySpec::resolve(topology, mu) {
                            Ok(spec) => Arc::new(TopologyGraph::build(spec)?),
                            Err(e @ TopologyError::Unknown(_)) => return Err(e.into()),
                            Err(e) => {
                                skipped.push(SkippedPoint {
                                    function: objective.label(),
                                    n,
                                    mu,
                                    topology: topology.clone(),
                                    reason: e.to_string(),
                                });
                                continue;
                            }
                        };
                        for &p in &a.p {
                            for &tau in &a.tau {
                                points.push(SweepPoint {
                                    index: points.len(),
                                    objective: objective.clone(),
                                    topology: graph.clone(),
                                    p,
                                    tau,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok((points, skipped))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Parsed config file; unset keys leave the spec untouched.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(alias = "functions")]
    function: Option<OneOrMany<String>>,
    n: Option<OneOrMany<usize>>,
    mu: Option<OneOrMany<usize>>,
    #[serde(alias = "topologies")]
    topology: Option<OneOrMany<String>>,
    p: Option<OneOrMany<f64>>,
    tau: Option<OneOrMany<u64>>,
    reps: Option<usize>,
    seed: Option<u64>,
    budget: Option<u64>,
    out: Option<PathBuf>,
    #[serde(alias = "fixed-start")]
    fixed_start: Option<String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn apply(self, spec: &mut ExperimentSpec) -> Result<(), HarnessError> {
        let axes = &mut spec.axes;
        if let Some(v) = self.function {
            axes.functions = v.into_vec();
        }
        if let Some(v) = self.n {
            axes.n = v.into_vec();
        }
        if let Some(v) = self.mu {
            axes.mu = v.into_vec();
        }
        if let Some(v) = self.topology {
            axes.topologies = v.into_vec();
        }
        if let Some(v) = self.p {
            axes.p = v.into_vec();
        }
        if let Some(v) = self.tau {
            axes.tau = v.into_vec();
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
        if let Some(v) = self.out {
            spec.out = Some(v);
        }
        if let Some(v) = self.fixed_start {
            spec.fixed_start = Some(v.parse()?);
        }
        Ok(())
    }
}
