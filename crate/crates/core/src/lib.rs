//! Island-model parallel (1+1) EA: simulator, fitness-level runtime bounds,
//! information-propagation processes, an exact Markov-chain oracle for tiny
//! instances and a reproducible experiment harness.

pub mod bitstring;
pub mod bounds;
pub mod harness;
pub mod island_model;
pub mod objective;
pub mod oracle;
pub mod propagation;
pub mod rng;
pub mod topology;

pub use island_model::{run, ModelConfig, RunOutcome};
pub use objective::{BitString, LevelPartition, Objective};
pub use topology::{TopologyGraph, TopologyKind, TopologySpec};
