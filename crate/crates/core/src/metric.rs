//! Shortest-path metrics stored as integers in a per-metric unit.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHABLE};
use crate::rational::{is_positive, Rational};

/// Finite metric `unit * dist[i][j]` with integer `dist`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMetric {
    n: usize,
    dist: Vec<u32>,
    unit: Rational,
}

impl ScaledMetric {
    /// Checks symmetry, the zero diagonal and positivity off it. The triangle
    /// inequality is left to [`ScaledMetric::triangle_violation`], which is cubic.
    pub fn from_matrix(n: usize, dist: Vec<u32>, unit: Rational) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidParameter(format!("metric: {msg}")));
        if dist.len() != n * n {
            return invalid(format!("expected {} entries, got {}", n * n, dist.len()));
        }
        if !is_positive(&unit) {
            return invalid("unit must be positive".into());
        }
        for i in 0..n {
            if dist[i * n + i] != 0 {
                return invalid(format!("nonzero diagonal at {i}"));
            }
            for j in (i + 1)..n {
                let d = dist[i * n + j];
                if d != dist[j * n + i] {
                    return invalid(format!("asymmetric at ({i},{j})"));
                }
                if d == 0 {
                    return invalid(format!("distinct points {i} and {j} at distance 0"));
                }
            }
        }
        Ok(ScaledMetric { n, dist, unit })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn unit(&self) -> &Rational {
        &self.unit
    }

    /// Distance in units.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.n + j]
    }

    pub fn distance(&self, i: usize, j: usize) -> Rational {
        &self.unit * Rational::from_integer(self.get(i, j).into())
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    /// Largest distance, in units.
    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn with_unit(&self, unit: Rational) -> Result<Self> {
        Self::from_matrix(self.n, self.dist.clone(), unit)
    }

    /// Sub-metric on the listed points, in the given order.
    pub fn restrict(&self, points: &[usize]) -> Result<Self> {
        let k = points.len();
        let mut dist = vec![0u32; k * k];
        for (a, &i) in points.iter().enumerate() {
            for (b, &j) in points.iter().enumerate() {
                dist[a * k + b] = self.get(i, j);
            }
        }
        Self::from_matrix(k, dist, self.unit.clone())
    }

    /// First triple `(i, j, k)` with `d(i,k) > d(i,j) + d(j,k)`.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let dij = self.get(i, j) as u64;
                for k in 0..n {
                    if self.get(i, k) as u64 > dij + self.get(j, k) as u64 {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }
}

/// All-pairs shortest paths by one BFS per source.
pub fn apsp(g: &Graph) -> Result<ScaledMetric> {
    let sources: Vec<usize> = (0..g.n()).collect();
    metric_among(g, &sources)
}

/// Shortest-path metric of `g` restricted to `points` (indexed by position in
/// `points`). Runs one BFS per listed point.
pub fn metric_among(g: &Graph, points: &[usize]) -> Result<ScaledMetric> {
    let adj = g.adjacency();
    let k = points.len();
    if let Some(&p) = points.iter().find(|&&p| p >= g.n()) {
        return Err(Error::OutOfRange { source_id: p, target: p, len: g.n() });
    }
    let rows: Vec<Vec<u32>> = points.par_iter().map(|&p| adj.bfs(p)).collect();
    // connectivity of the whole graph is required, not just among `points`
    if let Some((src, row)) = points.iter().zip(&rows).next() {
        if let Some(far) = row.iter().position(|&d| d == UNREACHABLE) {
            return Err(Error::Disconnected(*src, far));
        }
    }
    let mut dist = vec![0u32; k * k];
    for (a, row) in rows.iter().enumerate() {
        for (b, &q) in points.iter().enumerate() {
            dist[a * k + b] = row[q];
        }
    }
    ScaledMetric::from_matrix(k, dist, g.unit().clone())
}
