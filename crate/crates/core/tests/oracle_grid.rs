//! Exact expected times against 1e5-run Monte Carlo means on small models.

use std::sync::Arc;

use parallel_ea::harness::stats::Summary;
use parallel_ea::island_model::{run, ModelConfig};
use parallel_ea::objective::Objective;
use parallel_ea::oracle::{expected_parallel_time, Lumping, OracleOptions};
use parallel_ea::rng;
use parallel_ea::topology::TopologyGraph;

const RUNS: u64 = 100_000;
const Z: f64 = 3.2905;

fn check(function: &str, n: usize, topology: &str, mu: usize, p: f64, tau: u64, lumping: Lumping) {
    let objective = Objective::parse(function, n).unwrap();
    let graph = Arc::new(TopologyGraph::from_text(topology, mu).unwrap());
    let cfg = ModelConfig::new(objective, graph).with_p(p).with_tau(tau);
    let exact = expected_parallel_time(&cfg, OracleOptions { lumping, ..OracleOptions::default() }).unwrap();
    let key = [n as u64, mu as u64, p.to_bits(), tau, function.len() as u64, topology.len() as u64];
    let times: Vec<u64> = (0..RUNS)
        .map(|i| {
            let seed = rng::split(rng::split(77, &key), &[i]);
            run(&cfg.clone().with_seed(seed)).unwrap().t_par
        })
        .collect();
    let s = Summary::of_u64(times);
    let half = Z * s.std / (RUNS as f64).sqrt();
    assert!(
        (s.mean - exact).abs() <= half,
        "{function} n={n} {topology} mu={mu} p={p} tau={tau}: mc {:.4} vs exact {exact:.4} (±{half:.4})",
        s.mean
    );
}

#[test]
fn onemax_counts_match_simulation() {
    for (topology, mu) in [("complete", 3), ("uniring", 3), ("biring", 2)] {
        for p in [0.0, 0.3, 1.0] {
            check("onemax", 3, topology, mu, p, 1, Lumping::OneMaxCounts);
        }
    }
    check("onemax", 4, "uniring", 2, 0.5, 3, Lumping::OneMaxCounts);
}

#[test]
fn bitstring_chains_match_simulation() {
    for function in ["lo", "jump:1"] {
        for p in [0.2, 1.0] {
            check(function, 3, "uniring", 3, p, 1, Lumping::Bitstrings);
        }
    }
    check("lo", 3, "complete", 2, 0.7, 2, Lumping::Bitstrings);
    check("jump:2", 3, "biring", 2, 1.0, 1, Lumping::Bitstrings);
}
