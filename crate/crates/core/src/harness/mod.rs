//! Experiment harness: configuration, replicated sweeps, summary statistics,
//! CSV emission, bound audits, presets and the command-line interface.

pub mod audit;
pub mod cli;
pub mod config;
pub mod experiment;
pub mod presets;
pub mod stats;

use thiserror::Error;

use crate::bitstring::BitStringError;
use crate::bounds::BoundError;
use crate::island_model::ModelError;
use crate::objective::ObjectiveError;
use crate::oracle::OracleError;
use crate::propagation::PropagationError;
use crate::topology::TopologyError;

pub use audit::{audit_bounds, AuditEntry, AuditReport};
pub use config::{ExperimentSpec, SweepAxes, SweepPoint};
pub use experiment::{run_experiment, ExperimentResult, RunRecord, SummaryRow};
pub use stats::{speedup_efficiency, Summary};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("no mu=1 baseline for this point")]
    MissingBaseline,
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    BitString(#[from] BitStringError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
