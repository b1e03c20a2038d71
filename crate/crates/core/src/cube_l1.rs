//! Integer `l1` coordinates for the gadgetized Hamming cube `S_n`.
//!
//! The tree `T_r` sits in `l1^m` (`m` = number of tree edges) with the root
//! at the origin and every other vertex at the sum of the unit vectors of the
//! edges on its path to the root. The copy of the tree for cube vertex
//! `theta` is translated by `l * theta` in the extra `l1^n` block, and the
//! path for the cube edge `theta -- theta + e_t` is the straight segment
//! between the two copies of the leaf assigned to direction `t`. Every edge
//! of `S_n` is then a unit segment parallel to a coordinate axis.

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distortion::{distortion, DistortionReport, VertexMap};
use crate::error::{Error, Result};
use crate::families::{hamming, tree3, RootedTree};
use crate::gadget::GadgetParams;
use crate::graph::Graph;
use crate::metric::{apsp, metric_among};
use crate::points::{Norm, PointSet};
use crate::rational::{self, Rational};

/// Tree of depth `r` with its isometric integer coordinates in `l1^m`.
pub fn tree_l1_coords(r: usize) -> Result<(RootedTree, Vec<Vec<i64>>)> {
    let tree = tree3(r)?;
    let m = tree.n() - 1;
    let mut coords = vec![vec![0i64; m]; tree.n()];
    // IDs are assigned level by level, so a parent always precedes its children;
    // vertex c != root owns the edge to its parent and the unit vector e_(c-1)
    for c in 1..tree.n() {
        let p = tree.parent[c].expect("non-root has a parent");
        let mut x = coords[p].clone();
        x[c - 1] = 1;
        coords[c] = x;
    }
    Ok((tree, coords))
}

#[derive(Clone, Debug)]
pub struct CubeL1Model {
    pub n: usize,
    pub params: GadgetParams,
    /// Dimension of the tree block, `3 (2^r - 1)`.
    pub m: usize,
    pub graph: Graph,
    /// `roots[theta]` is the root of the tree for cube vertex `theta`.
    pub roots: Vec<usize>,
    points: Vec<Vec<i64>>,
}

impl CubeL1Model {
    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    pub fn point(&self, v: usize) -> &[i64] {
        &self.points[v]
    }

    pub fn l1(&self, a: usize, b: usize) -> u64 {
        l1_distance(&self.points[a], &self.points[b])
    }

    /// Coordinates as an exact `l1` point set.
    pub fn coords(&self) -> PointSet {
        PointSet::from_integer_rows(Norm::L1, &self.points).expect("rows share one dimension")
    }

    /// Every edge is a unit segment; returns the first edge that is not.
    pub fn non_unit_edge(&self) -> Option<(usize, usize)> {
        self.graph.edges().iter().copied().find(|&(a, b)| self.l1(a, b) != 1)
    }
}

fn l1_distance(a: &[i64], b: &[i64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

/// Builds `S_n` with `r` minimal for `n <= 3 * 2^(r-1)` and `l` from
/// [`GadgetParams::choose`] (so `4r <= l`). Leaves in ID order serve the
/// directions `e_1, ..., e_n`.
pub fn build_model(n: usize, epsilon: Rational) -> Result<CubeL1Model> {
    build_model_with(n, GadgetParams::choose(n, epsilon)?)
}

pub fn build_model_with(n: usize, params: GadgetParams) -> Result<CubeL1Model> {
    if n == 0 {
        return Err(Error::InvalidParameter("cube dimension must be >= 1".into()));
    }
    if params.leaves() < n {
        return Err(Error::InvalidParameter(format!("tree has {} leaves, fewer than {n} directions", params.leaves())));
    }
    let (tree, tree_coords) = tree_l1_coords(params.r as usize)?;
    let t = tree.n();
    let l = params.l as usize;
    let m = t - 1;
    let cube = 1usize.checked_shl(n as u32).filter(|_| n < 40).ok_or(Error::SizeCap {
        requested: u128::MAX,
        cap: crate::DEFAULT_VERTEX_CAP,
    })?;
    let total = (cube as u128) * (t as u128) + (n as u128) * (cube as u128 / 2) * (l as u128 - 1);
    if total > crate::DEFAULT_VERTEX_CAP as u128 {
        return Err(Error::SizeCap { requested: total, cap: crate::DEFAULT_VERTEX_CAP });
    }
    let total = total as usize;
    let mut points = Vec::with_capacity(total);
    let mut edges = Vec::with_capacity(total + cube);
    let cube_part = |theta: usize| (0..n).map(move |i| if theta >> i & 1 == 1 { l as i64 } else { 0 });
    for theta in 0..cube {
        for (local, x) in tree_coords.iter().enumerate() {
            debug_assert_eq!(points.len(), theta * t + local);
            points.push(x.iter().copied().chain(cube_part(theta)).collect::<Vec<i64>>());
        }
        edges.extend(tree.graph.edges().iter().map(|&(a, b)| (theta * t + a, theta * t + b)));
    }
    for theta in 0..cube {
        for dir in 0..n {
            if theta >> dir & 1 == 1 {
                continue;
            }
            let other = theta | (1 << dir);
            let leaf = tree.leaves[dir];
            let mut prev = theta * t + leaf;
            for step in 1..l {
                let mut x = points[theta * t + leaf].clone();
                x[m + dir] = step as i64;
                let id = points.len();
                points.push(x);
                edges.push((prev, id));
                prev = id;
            }
            edges.push((prev, other * t + leaf));
        }
    }
    let graph = Graph::simple(points.len(), edges)?;
    let roots = (0..cube).map(|theta| theta * t + tree.root).collect();
    Ok(CubeL1Model { n, params, m, graph, roots, points })
}

#[derive(Clone, Debug, Serialize)]
pub struct BilipschitzReport {
    pub ok: bool,
    /// Every edge of `S_n` has `l1` length exactly 1.
    pub edges_unit: bool,
    /// `||x - y||_1 <= d(x, y)` for every checked pair.
    pub lower_ok: bool,
    /// `d(x, y) <= 4 ||x - y||_1` for every checked pair.
    pub upper_ok: bool,
    #[serde(with = "rational::serde_report")]
    pub max_ratio: Rational,
    pub max_ratio_pair: (usize, usize),
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub violation: Option<(usize, usize)>,
}

#[derive(Clone, Copy)]
struct Worst {
    d: u64,
    l1: u64,
    pair: (usize, usize),
    lower_ok: bool,
    upper_ok: bool,
    violation: Option<(usize, usize)>,
    pairs: u64,
}

impl Worst {
    fn empty() -> Self {
        Worst { d: 0, l1: 1, pair: (0, 0), lower_ok: true, upper_ok: true, violation: None, pairs: 0 }
    }

    fn visit(mut self, x: usize, y: usize, d: u64, l1: u64) -> Self {
        let low = l1 <= d;
        let high = d <= 4 * l1;
        if (!low || !high) && self.violation.is_none() {
            self.violation = Some((x, y));
        }
        self.lower_ok &= low;
        self.upper_ok &= high;
        if d * self.l1 > self.d * l1 {
            self.d = d;
            self.l1 = l1;
            self.pair = (x, y);
        }
        self.pairs += 1;
        self
    }

    fn merge(self, other: Worst) -> Worst {
        let (d, l1, pair) = if other.d * self.l1 > self.d * other.l1 {
            (other.d, other.l1, other.pair)
        } else {
            (self.d, self.l1, self.pair)
        };
        Worst {
            d,
            l1,
            pair,
            lower_ok: self.lower_ok && other.lower_ok,
            upper_ok: self.upper_ok && other.upper_ok,
            violation: self.violation.or(other.violation),
            pairs: self.pairs + other.pairs,
        }
    }
}

fn finish(model: &CubeL1Model, worst: Worst, exhaustive: bool) -> BilipschitzReport {
    let edges_unit = model.non_unit_edge().is_none();
    BilipschitzReport {
        ok: edges_unit && worst.lower_ok && worst.upper_ok,
        edges_unit,
        lower_ok: worst.lower_ok,
        upper_ok: worst.upper_ok,
        max_ratio: Rational::new(BigInt::from(worst.d), BigInt::from(worst.l1)),
        max_ratio_pair: worst.pair,
        pairs_checked: worst.pairs,
        exhaustive,
        violation: worst.violation,
    }
}

/// Checks `||x - y||_1 <= d(x, y) <= 4 ||x - y||_1` over all vertex pairs.
pub fn certify_4_bilipschitz(model: &CubeL1Model) -> Result<BilipschitzReport> {
    let dist = apsp(&model.graph)?;
    let n = model.graph.n();
    let worst = (0..n)
        .into_par_iter()
        .map(|x| {
            let row = dist.row(x);
            ((x + 1)..n).fold(Worst::empty(), |w, y| w.visit(x, y, row[y] as u64, model.l1(x, y)))
        })
        .reduce(Worst::empty, Worst::merge);
    Ok(finish(model, worst, true))
}

/// Same inequalities from `sources` randomly chosen vertices (fixed `seed`)
/// to every other vertex; for models too large for the exhaustive check.
pub fn certify_4_bilipschitz_sampled(model: &CubeL1Model, sources: usize, seed: u64) -> Result<BilipschitzReport> {
    let n = model.graph.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked: Vec<usize> = sample(&mut rng, n, sources.min(n)).into_vec();
    let adj = model.graph.adjacency();
    let worst = picked
        .par_iter()
        .map(|&x| {
            let row = adj.bfs(x);
            (0..n).filter(|&y| y != x).fold(Worst::empty(), |w, y| w.visit(x, y, row[y] as u64, model.l1(x, y)))
        })
        .reduce(Worst::empty, Worst::merge);
    Ok(finish(model, worst, false))
}

/// Distortion of `theta -> root(theta)` from `(H_n, l * d_H)` into `S_n`.
pub fn certify_cube_embedding(model: &CubeL1Model) -> Result<DistortionReport> {
    let cube = hamming(model.n, crate::DEFAULT_VERTEX_CAP)?;
    let source = apsp(&cube)?.with_unit(Rational::from_integer(model.params.l.into()))?;
    let target = metric_among(&model.graph, &model.roots)?;
    distortion(&VertexMap::identity(model.roots.len()), &source, &target)
}
