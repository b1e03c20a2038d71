//! Undirected graphs with a single edge length.

use std::collections::VecDeque;

use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{format_rational, is_positive, Rational};

/// Undirected graph on vertices `0..n` whose edges all have length `unit`.
///
/// Edges are stored normalized (`u < v`) and sorted. Self-loops live in a
/// separate list, may repeat, and never shorten a path. Each loop adds 1 to
/// the degree of its vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    loops: Vec<usize>,
    unit: Rational,
}

impl Graph {
    pub fn from_edges(
        n: usize,
        unit: Rational,
        edges: impl IntoIterator<Item = (usize, usize)>,
        loops: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        if !is_positive(&unit) {
            return Err(Error::InvalidGraph(format!("unit must be positive, got {}", format_rational(&unit))));
        }
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) is a self-loop; list it under loops")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({},{})", w[0].0, w[0].1)));
        }
        let mut loops: Vec<usize> = loops.into_iter().collect();
        if let Some(&v) = loops.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidGraph(format!("loop at {v} is outside 0..{n}")));
        }
        loops.sort_unstable();
        Ok(Graph { n, edges: normalized, loops, unit })
    }

    /// Unit-length graph without loops.
    pub fn simple(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_edges(n, Rational::one(), edges, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> &Rational {
        &self.unit
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Same combinatorial graph with a different edge length.
    pub fn with_unit(&self, unit: Rational) -> Result<Self> {
        if !is_positive(&unit) {
            return Err(Error::InvalidGraph("unit must be positive".into()));
        }
        Ok(Graph { unit, ..self.clone() })
    }

    /// Same combinatorial graph with unit edge length.
    pub fn unweighted(&self) -> Self {
        Graph { unit: Rational::one(), ..self.clone() }
    }

    pub fn without_loops(&self) -> Self {
        Graph { loops: Vec::new(), ..self.clone() }
    }

    pub fn has_unit_length(&self) -> bool {
        self.unit.is_one()
    }

    /// Degrees with the one-per-loop convention.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        for &v in &self.loops {
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self.n, &self.edges)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let dist = self.adjacency().bfs(0);
        dist.iter().all(|&d| d != UNREACHABLE)
    }
}

pub const UNREACHABLE: u32 = u32::MAX;

/// Compressed adjacency lists; loops are omitted.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Adjacency {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(u, v) in edges {
            counts[u + 1] += 1;
            counts[v + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut targets = vec![0usize; 2 * edges.len()];
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            targets[counts[v]..counts[v + 1]].sort_unstable();
        }
        Adjacency { offsets: counts, targets }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Hop distances from `source`; unreachable vertices get [`UNREACHABLE`].
    pub fn bfs(&self, source: usize) -> Vec<u32> {
        self.bfs_bounded(source, UNREACHABLE)
    }

    /// BFS that stops expanding past `radius`.
    pub fn bfs_bounded(&self, source: usize, radius: u32) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.len()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            if du >= radius {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w] == UNREACHABLE {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}
