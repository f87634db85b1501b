//! Migration topologies as explicit directed graphs.
//!
//! Undirected topologies are stored as pairs of directed edges. Torus vertices
//! are laid out row-major; hypercube vertex labels are the vertex indices read
//! as `d`-bit integers.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("torus sides must both be at least 3, got {width}x{height}")]
    TorusTooSmall { width: usize, height: usize },
    #[error("invalid topology size: {0}")]
    InvalidSize(String),
    #[error("vertex {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("topology is not strongly connected")]
    NotConnected,
    #[error("unknown topology '{0}'")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    UniRing,
    BiRing,
    Torus,
    Hypercube,
    Complete,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 5] = [
        TopologyKind::UniRing,
        TopologyKind::BiRing,
        TopologyKind::Torus,
        TopologyKind::Hypercube,
        TopologyKind::Complete,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::UniRing => "uniring",
            TopologyKind::BiRing => "biring",
            TopologyKind::Torus => "torus",
            TopologyKind::Hypercube => "hypercube",
            TopologyKind::Complete => "complete",
        }
    }

    /// Whether every edge has its reverse.
    pub fn is_undirected(self) -> bool {
        !matches!(self, TopologyKind::UniRing)
    }

    pub(crate) fn code(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TopologyKind {
    type Err = TopologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniring" | "ring" => Ok(TopologyKind::UniRing),
            "biring" => Ok(TopologyKind::BiRing),
            "torus" => Ok(TopologyKind::Torus),
            "hypercube" => Ok(TopologyKind::Hypercube),
            "complete" => Ok(TopologyKind::Complete),
            other => Err(TopologyError::Unknown(other.to_string())),
        }
    }
}

/// Kind plus the kind-specific size parameters needed to build a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologySpec {
    UniRing { mu: usize },
    BiRing { mu: usize },
    Torus { width: usize, height: usize },
    Hypercube { dimension: u32 },
    Complete { mu: usize },
}

impl TopologySpec {
    pub fn kind(&self) -> TopologyKind {
        match self {
            TopologySpec::UniRing { .. } => TopologyKind::UniRing,
            TopologySpec::BiRing { .. } => TopologyKind::BiRing,
            TopologySpec::Torus { .. } => TopologyKind::Torus,
            TopologySpec::Hypercube { .. } => TopologyKind::Hypercube,
            TopologySpec::Complete { .. } => TopologyKind::Complete,
        }
    }

    pub fn num_vertices(&self) -> usize {
        match *self {
            TopologySpec::UniRing { mu }
            | TopologySpec::BiRing { mu }
            | TopologySpec::Complete { mu } => mu,
            TopologySpec::Torus { width, height } => width * height,
            TopologySpec::Hypercube { dimension } => 1usize << dimension,
        }
    }

    /// Value of the `topo_params` CSV column.
    pub fn params_label(&self) -> String {
        match *self {
            TopologySpec::Torus { width, height } => format!("{width}x{height}"),
            TopologySpec::Hypercube { dimension } => format!("d={dimension}"),
            _ => String::new(),
        }
    }

    /// Resolves a topology string (`uniring`, `biring`, `torus`, `torus:WxH`,
    /// `hypercube`, `complete`) against an island count.
    ///
    /// A bare `torus` takes the square layout `√μ × √μ`; an explicit `WxH`
    /// must multiply to `mu`. A hypercube needs `mu` to be a power of two.
    pub fn resolve(text: &str, mu: usize) -> Result<Self, TopologyError> {
        if mu == 0 {
            return Err(TopologyError::InvalidSize("island count must be at least 1".into()));
        }
        let text = text.trim();
        let (head, tail) = match text.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (text, None),
        };
        let kind: TopologyKind = head.parse()?;
        match kind {
            TopologyKind::UniRing => Ok(TopologySpec::UniRing { mu }),
            TopologyKind::BiRing => Ok(TopologySpec::BiRing { mu }),
            TopologyKind::Complete => Ok(TopologySpec::Complete { mu }),
            TopologyKind::Hypercube => {
                if !mu.is_power_of_two() {
                    return Err(TopologyError::InvalidSize(format!(
                        "hypercube needs a power-of-two island count, got {mu}"
                    )));
                }
                Ok(TopologySpec::Hypercube { dimension: mu.trailing_zeros() })
            }
            TopologyKind::Torus => {
                let (width, height) = match tail {
                    Some(dims) => {
                        let (w, h) = dims
                            .split_once(['x', 'X'])
                            .ok_or_else(|| TopologyError::Unknown(text.to_string()))?;
                        let parse = |s: &str| {
                            s.trim()
                                .parse::<usize>()
                                .map_err(|_| TopologyError::Unknown(text.to_string()))
                        };
                        (parse(w)?, parse(h)?)
                    }
                    None => {
                        let side = (mu as f64).sqrt().round() as usize;
                        if side * side != mu {
                            return Err(TopologyError::InvalidSize(format!(
                                "square torus needs a square island count, got {mu}"
                            )));
                        }
                        (side, side)
                    }
                };
                if width * height != mu {
                    return Err(TopologyError::InvalidSize(format!(
                        "torus {width}x{height} does not have {mu} islands"
                    )));
                }
                if width < 3 || height < 3 {
                    return Err(TopologyError::TorusTooSmall { width, height });
                }
                Ok(TopologySpec::Torus { width, height })
            }
        }
    }
}

/// An immutable directed migration graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyGraph {
    spec: TopologySpec,
    out_edges: Vec<Vec<usize>>,
}

impl TopologyGraph {
    pub fn build(spec: TopologySpec) -> Result<Self, TopologyError> {
        let out_edges = match spec {
            TopologySpec::UniRing { mu } => {
                check_size(mu)?;
                (0..mu)
                    .map(|v| if mu > 1 { vec![(v + 1) % mu] } else { Vec::new() })
                    .collect()
            }
            TopologySpec::BiRing { mu } => {
                check_size(mu)?;
                (0..mu)
                    .map(|v| {
                        let mut adj = Vec::with_capacity(2);
                        if mu > 1 {
                            adj.push((v + 1) % mu);
                            let prev = (v + mu - 1) % mu;
                            if !adj.contains(&prev) {
                                adj.push(prev);
                            }
                        }
                        adj
                    })
                    .collect()
            }
            TopologySpec::Torus { width, height } => {
                if width < 3 || height < 3 {
                    return Err(TopologyError::TorusTooSmall { width, height });
                }
                (0..width * height)
                    .map(|v| {
                        let (r, c) = (v / width, v % width);
                        vec![
                            r * width + (c + 1) % width,
                            r * width + (c + width - 1) % width,
                            ((r + 1) % height) * width + c,
                            ((r + height - 1) % height) * width + c,
                        ]
                    })
                    .collect()
            }
            TopologySpec::Hypercube { dimension } => {
                if dimension >= usize::BITS - 1 {
                    return Err(TopologyError::InvalidSize(format!(
                        "hypercube dimension {dimension} too large"
                    )));
                }
                let mu = 1usize << dimension;
                (0..mu)
                    .map(|v| (0..dimension).map(|b| v ^ (1 << b)).collect())
                    .collect()
            }
            TopologySpec::Complete { mu } => {
                check_size(mu)?;
                (0..mu).map(|v| (0..mu).filter(|&u| u != v).collect()).collect()
            }
        };
        Ok(TopologyGraph { spec, out_edges })
    }

    /// Parses a topology string for `mu` islands and builds it.
    pub fn from_text(text: &str, mu: usize) -> Result<Self, TopologyError> {
        Self::build(TopologySpec::resolve(text, mu)?)
    }

    pub fn spec(&self) -> TopologySpec {
        self.spec
    }

    pub fn kind(&self) -> TopologyKind {
        self.spec.kind()
    }

    pub fn num_vertices(&self) -> usize {
        self.out_edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, v: usize) -> Result<&[usize], TopologyError> {
        self.out_edges
            .get(v)
            .map(Vec::as_slice)
            .ok_or(TopologyError::IndexOutOfRange { index: v, len: self.num_vertices() })
    }

    /// Adjacency lists for all vertices, indexed by source.
    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.out_edges
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_edges
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_edges.get(u).is_some_and(|adj| adj.contains(&v))
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges().all(|(u, v)| self.has_edge(v, u))
    }

    /// Shortest directed path lengths from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Result<Vec<Option<usize>>, TopologyError> {
        let mu = self.num_vertices();
        if source >= mu {
            return Err(TopologyError::IndexOutOfRange { index: source, len: mu });
        }
        let mut dist = vec![None; mu];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &v in &self.out_edges[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.diameter().is_ok()
    }

    /// Largest shortest-path length over all ordered vertex pairs, by a BFS
    /// from every vertex.
    pub fn diameter(&self) -> Result<usize, TopologyError> {
        let mut diam = 0;
        for s in 0..self.num_vertices() {
            for d in self.distances_from(s)? {
                diam = diam.max(d.ok_or(TopologyError::NotConnected)?);
            }
        }
        Ok(diam)
    }
}

fn check_size(mu: usize) -> Result<(), TopologyError> {
    if mu == 0 {
        Err(TopologyError::InvalidSize("island count must be at least 1".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn edge_set(g: &TopologyGraph) -> HashSet<(usize, usize)> {
        g.edges().collect()
    }

    #[test]
    fn uniring_three() {
        let g = TopologyGraph::build(TopologySpec::UniRing { mu: 3 }).unwrap();
        assert_eq!(edge_set(&g), HashSet::from([(0, 1), (1, 2), (2, 0)]));
        assert_eq!(g.out_neighbors(2).unwrap(), &[0]);
    }

    #[test]
    fn hypercube_three() {
        let g = TopologyGraph::build(TopologySpec::Hypercube { dimension: 3 }).unwrap();
        assert_eq!(g.num_vertices(), 8);
        assert!(g.adjacency().iter().all(|a| a.len() == 3));
        assert_eq!(g.num_edges(), 24);
        let g2 = TopologyGraph::build(TopologySpec::Hypercube { dimension: 2 }).unwrap();
        assert_eq!(g2.out_neighbors(0).unwrap(), &[1, 2]);
    }

    #[test]
    fn complete_five_and_three() {
        let g = TopologyGraph::build(TopologySpec::Complete { mu: 5 }).unwrap();
        assert_eq!(g.num_edges(), 20);
        assert!(g.adjacency().iter().all(|a| a.len() == 4));
        assert_eq!(g.diameter().unwrap(), 1);
        let g3 = TopologyGraph::build(TopologySpec::Complete { mu: 3 }).unwrap();
        assert_eq!(g3.out_neighbors(0).unwrap(), &[1, 2]);
    }

    #[test]
    fn torus_three_by_three() {
        let g = TopologyGraph::build(TopologySpec::Torus { width: 3, height: 3 }).unwrap();
        assert_eq!(g.num_vertices(), 9);
        assert_eq!(g.num_edges(), 36);
        assert!(g.is_symmetric());
    }

    #[test]
    fn torus_too_small() {
        assert_eq!(
            TopologyGraph::build(TopologySpec::Torus { width: 2, height: 5 }),
            Err(TopologyError::TorusTooSmall { width: 2, height: 5 })
        );
    }

    #[test]
    fn zero_islands_rejected() {
        for spec in [
            TopologySpec::UniRing { mu: 0 },
            TopologySpec::BiRing { mu: 0 },
            TopologySpec::Complete { mu: 0 },
        ] {
            assert!(matches!(TopologyGraph::build(spec), Err(TopologyError::InvalidSize(_))));
        }
    }

    #[test]
    fn single_island_has_no_edges() {
        for spec in [
            TopologySpec::UniRing { mu: 1 },
            TopologySpec::BiRing { mu: 1 },
            TopologySpec::Complete { mu: 1 },
            TopologySpec::Hypercube { dimension: 0 },
        ] {
            let g = TopologyGraph::build(spec).unwrap();
            assert_eq!(g.num_vertices(), 1);
            assert_eq!(g.num_edges(), 0);
            assert_eq!(g.diameter().unwrap(), 0);
        }
    }

    #[test]
    fn index_out_of_range() {
        let g = TopologyGraph::build(TopologySpec::UniRing { mu: 3 }).unwrap();
        assert_eq!(g.out_neighbors(3), Err(TopologyError::IndexOutOfRange { index: 3, len: 3 }));
    }

    #[test]
    fn ring_diameters() {
        let bi = TopologyGraph::build(TopologySpec::BiRing { mu: 6 }).unwrap();
        let uni = TopologyGraph::build(TopologySpec::UniRing { mu: 6 }).unwrap();
        assert_eq!(bi.diameter().unwrap(), 3);
        assert_eq!(uni.diameter().unwrap(), 5);
    }

    #[test]
    fn hypercube_diameter_four() {
        let g = TopologyGraph::build(TopologySpec::Hypercube { dimension: 4 }).unwrap();
        assert_eq!(g.diameter().unwrap(), 4);
    }

    #[test]
    fn not_connected_detected() {
        let g = TopologyGraph {
            spec: TopologySpec::UniRing { mu: 2 },
            out_edges: vec![vec![1], vec![]],
        };
        assert_eq!(g.diameter(), Err(TopologyError::NotConnected));
        assert!(!g.is_strongly_connected());
    }

    #[test]
    fn resolve_strings() {
        assert_eq!(
            TopologySpec::resolve("torus", 16).unwrap(),
            TopologySpec::Torus { width: 4, height: 4 }
        );
        assert_eq!(
            TopologySpec::resolve("torus:3x5", 15).unwrap(),
            TopologySpec::Torus { width: 3, height: 5 }
        );
        assert!(TopologySpec::resolve("torus:3x5", 16).is_err());
        assert!(TopologySpec::resolve("torus", 4).is_err());
        assert_eq!(
            TopologySpec::resolve("hypercube", 8).unwrap(),
            TopologySpec::Hypercube { dimension: 3 }
        );
        assert!(TopologySpec::resolve("hypercube", 6).is_err());
        assert!(TopologySpec::resolve("star", 6).is_err());
        assert_eq!(TopologySpec::Torus { width: 4, height: 4 }.params_label(), "4x4");
    }
}
