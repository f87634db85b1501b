//! Named experiment presets.
//!
//! `fig1-desk` and `fig2-desk` are desk-scale versions of the topology and
//! island-count sweeps (n = 64, μ ≤ 16); `fig1-paper` is the full-size
//! transmission-probability sweep (n = 256, μ = 64), which takes hours.

use super::config::{ExperimentSpec, SweepAxes};
use super::HarnessError;
use crate::topology::TopologyKind;

pub const NAMES: [&str; 3] = ["fig1-desk", "fig2-desk", "fig1-paper"];

fn all_topologies() -> Vec<String> {
    TopologyKind::ALL.iter().map(|k| k.name().to_string()).collect()
}

/// `0, 1/steps, ..., 1`, each computed as `i / steps` so labels stay clean.
pub fn p_grid(steps: u32) -> Vec<f64> {
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

pub fn preset(name: &str) -> Result<ExperimentSpec, HarnessError> {
    let base = ExperimentSpec { reps: 100, base_seed: 2014, ..ExperimentSpec::default() };
    let axes = match name {
        "fig1-desk" => SweepAxes {
            functions: vec!["onemax".into(), "lo".into()],
            n: vec![64],
            mu: vec![16],
            topologies: all_topologies(),
            p: p_grid(20),
            tau: vec![1],
        },
        "fig2-desk" => SweepAxes {
            functions: vec!["onemax".into(), "lo".into()],
            n: vec![64],
            mu: vec![1, 2, 4, 8, 16],
            topologies: all_topologies(),
            p: vec![0.1, 1.0],
            tau: vec![1],
        },
        "fig1-paper" => SweepAxes {
            functions: vec!["onemax".into(), "lo".into()],
            n: vec![256],
            mu: vec![64],
            topologies: all_topologies(),
            p: p_grid(100),
            tau: vec![1],
        },
        other => {
            return Err(HarnessError::Config(format!(
                "unknown preset '{other}' (expected one of {})",
                NAMES.join(", ")
            )))
        }
    };
    Ok(ExperimentSpec { axes, ..base })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_expand() {
        let (points, skipped) = preset("fig1-desk").unwrap().points().unwrap();
        assert_eq!(points.len(), 2 * 5 * 21);
        assert!(skipped.is_empty());
        assert_eq!(p_grid(20)[1].to_string(), "0.05");
        let (points, skipped) = preset("fig2-desk").unwrap().points().unwrap();
        // The square torus only exists at mu = 16 here.
        assert_eq!(skipped.len(), 2 * 4);
        assert_eq!(points.len(), 2 * (4 * 5 + 1) * 2);
        assert!(preset("fig3").is_err());
    }
}
