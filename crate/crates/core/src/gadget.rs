//! Degree-3 reduction: every vertex becomes a rooted 3-regular tree of depth
//! `r`, every edge a path of length `l` between two leaves.
//!
//! For the resulting graph `M` and the root map `v -> m(v)`:
//!
//! ```text
//! l * d_G(u, v) <= d_M(m(u), m(v)) <= (l + 2r) * d_G(u, v)
//! ```
//!
//! and [`certify_sandwich`] checks this for every pair.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::distortion::VertexMap;
use crate::error::{Error, Result};
use crate::families::{tree3, RootedTree};
use crate::graph::Graph;
use crate::metric::{apsp, metric_among};
use crate::rational::{self, format_rational, Rational};

/// Tree depth `r`, path length `l`, target `epsilon`, and the input max
/// degree the tree must accommodate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetParams {
    pub r: u32,
    pub l: u32,
    pub epsilon: Rational,
    pub delta_g: usize,
}

impl GadgetParams {
    /// Validates `3 * 2^(r-1) >= delta_g` and `(l + 2r) / l < 1 + epsilon`.
    pub fn new(r: u32, l: u32, epsilon: Rational, delta_g: usize) -> Result<Self> {
        if r == 0 || l == 0 {
            return Err(Error::InvalidParameter("gadget needs r >= 1 and l >= 1".into()));
        }
        if r > 40 {
            return Err(Error::InvalidParameter(format!("tree depth {r} is too large")));
        }
        if !epsilon.is_positive() {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", format_rational(&epsilon))));
        }
        let params = GadgetParams { r, l, epsilon, delta_g };
        if params.leaves() < delta_g {
            return Err(Error::InvalidParameter(format!(
                "tree of depth {r} has {} leaves, fewer than max degree {delta_g}",
                params.leaves()
            )));
        }
        if params.stretch() >= Rational::one() + &params.epsilon {
            return Err(Error::InvalidParameter(format!(
                "(l + 2r) / l = {} is not below 1 + epsilon",
                format_rational(&params.stretch())
            )));
        }
        Ok(params)
    }

    /// Smallest `r` with enough leaves, smallest `l` with
    /// `(l + 2r) / l < 1 + epsilon`, then `l` raised to at least `4r`.
    pub fn choose(delta_g: usize, epsilon: Rational) -> Result<Self> {
        if delta_g == 0 {
            return Err(Error::InvalidParameter("max degree must be >= 1".into()));
        }
        if !epsilon.is_positive() {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", format_rational(&epsilon))));
        }
        let mut r = 1u32;
        while 3usize.saturating_mul(1usize << (r - 1)) < delta_g {
            r += 1;
        }
        // (l + 2r)/l < 1 + eps  <=>  l > 2r / eps
        let bound = Rational::from_integer(BigInt::from(2 * r)) / &epsilon;
        let l = (bound.floor().to_integer() + BigInt::one())
            .try_into()
            .map_err(|_| Error::InvalidParameter("epsilon too small: path length overflows".into()))?;
        let l: u32 = std::cmp::max(l, 4 * r);
        Self::new(r, l, epsilon, delta_g)
    }

    pub fn leaves(&self) -> usize {
        3usize << (self.r - 1)
    }

    pub fn tree_size(&self) -> usize {
        (3usize << self.r) - 2
    }

    /// `(l + 2r) / l`
    pub fn stretch(&self) -> Rational {
        Rational::new(BigInt::from(self.l + 2 * self.r), BigInt::from(self.l))
    }
}

#[derive(Clone, Debug)]
pub struct GadgetResult {
    pub graph: Graph,
    /// `v -> m(v)`
    pub map: VertexMap,
    pub params: GadgetParams,
    /// `(v, neighbor) -> leaf of v's tree` where the path for edge `v neighbor` starts.
    pub leaf_assignment: BTreeMap<(usize, usize), usize>,
}

impl GadgetResult {
    pub fn root(&self, v: usize) -> usize {
        self.map.get(v).expect("every input vertex has a root")
    }

    pub fn roots(&self) -> Vec<usize> {
        self.map.iter().map(|(_, t)| t).collect()
    }
}

/// Vertex layout: the tree of input vertex `v` occupies
/// `v * T .. (v + 1) * T` with its root first (`T = 3 * 2^r - 2`); path
/// interiors follow, edge by edge in sorted order, walking from the smaller
/// endpoint. At each vertex, incident edges sorted by neighbor ID take leaves
/// in ID order.
pub fn transform(g: &Graph, params: &GadgetParams) -> Result<GadgetResult> {
    if !g.has_unit_length() {
        return Err(Error::NotUnitLength(format_rational(g.unit())));
    }
    if !g.loops().is_empty() {
        return Err(Error::InvalidGraph("gadget input must not carry self-loops".into()));
    }
    let tree = tree3(params.r as usize)?;
    let degrees = g.degrees();
    if let Some((v, &d)) = degrees.iter().enumerate().find(|(_, &d)| d > tree.leaves.len()) {
        return Err(Error::DegreeOverflow { vertex: v, degree: d, leaves: tree.leaves.len() });
    }
    let t = tree.n();
    let l = params.l as usize;
    let total = (g.n() as u128) * (t as u128) + (g.edge_count() as u128) * (l as u128 - 1);
    if total > crate::DEFAULT_VERTEX_CAP as u128 {
        return Err(Error::SizeCap { requested: total, cap: crate::DEFAULT_VERTEX_CAP });
    }
    let adj = g.adjacency();
    let mut leaf_assignment = BTreeMap::new();
    for v in 0..g.n() {
        for (k, &w) in adj.neighbors(v).iter().enumerate() {
            leaf_assignment.insert((v, w), v * t + tree.leaves[k]);
        }
    }
    let mut edges = Vec::with_capacity(g.n() * tree.graph.edge_count() + g.edge_count() * l);
    for v in 0..g.n() {
        edges.extend(tree.graph.edges().iter().map(|&(a, b)| (v * t + a, v * t + b)));
    }
    let mut next = g.n() * t;
    for &(u, w) in g.edges() {
        let start = leaf_assignment[&(u, w)];
        let end = leaf_assignment[&(w, u)];
        let mut prev = start;
        for _ in 1..l {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, end));
    }
    let graph = Graph::simple(next, edges)?;
    let map = VertexMap::from_pairs((0..g.n()).map(|v| (v, v * t + tree.root)))?;
    Ok(GadgetResult { graph, map, params: params.clone(), leaf_assignment })
}

/// Tree used at every vertex; exposed so callers can reason about the layout.
pub fn gadget_tree(params: &GadgetParams) -> Result<RootedTree> {
    tree3(params.r as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub ok: bool,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `(l + 2r) / l < 1 + epsilon`
    pub stretch_ok: bool,
    pub r: u32,
    pub l: u32,
    #[serde(with = "rational::serde_report")]
    pub epsilon: Rational,
    /// min over pairs of `d_M(m(u), m(v)) / d_G(u, v)`
    #[serde(with = "rational::serde_report")]
    pub worst_lower: Rational,
    pub worst_lower_pair: (usize, usize),
    /// max over pairs of the same ratio
    #[serde(with = "rational::serde_report")]
    pub worst_upper: Rational,
    pub worst_upper_pair: (usize, usize),
    pub pairs_checked: usize,
    /// First pair breaking either inequality.
    pub violation: Option<(usize, usize)>,
}

/// Exhaustive check of `l d_G <= d_M(m(.), m(.)) <= (l + 2r) d_G` over all
/// pairs of input vertices. A failure here means the construction is wrong.
pub fn certify_sandwich(g: &Graph, res: &GadgetResult) -> Result<SandwichReport> {
    let dg = apsp(g)?;
    let dm = metric_among(&res.graph, &res.roots())?;
    let (l, r) = (res.params.l as u64, res.params.r as u64);
    let n = g.n();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let (mut lower_ok, mut upper_ok) = (true, true);
    let mut violation = None;
    let mut lo: Option<(u64, u64, (usize, usize))> = None;
    let mut hi: Option<(u64, u64, (usize, usize))> = None;
    for u in 0..n {
        for v in (u + 1)..n {
            let a = dm.get(u, v) as u64;
            let b = dg.get(u, v) as u64;
            let low = l * b <= a;
            let high = a <= (l + 2 * r) * b;
            lower_ok &= low;
            upper_ok &= high;
            if (!low || !high) && violation.is_none() {
                violation = Some((u, v));
            }
            if lo.map_or(true, |(x, y, _)| a * y < x * b) {
                lo = Some((a, b, (u, v)));
            }
            if hi.map_or(true, |(x, y, _)| a * y > x * b) {
                hi = Some((a, b, (u, v)));
            }
        }
    }
    let (lo, hi) = (lo.expect("n >= 2"), hi.expect("n >= 2"));
    let ratio = |(a, b, _): (u64, u64, (usize, usize))| Rational::new(BigInt::from(a), BigInt::from(b));
    let stretch_ok = res.params.stretch() < Rational::one() + &res.params.epsilon;
    Ok(SandwichReport {
        ok: lower_ok && upper_ok && stretch_ok,
        lower_ok,
        upper_ok,
        stretch_ok,
        r: res.params.r,
        l: res.params.l,
        epsilon: res.params.epsilon.clone(),
        worst_lower: ratio(lo),
        worst_lower_pair: lo.2,
        worst_upper: ratio(hi),
        worst_upper_pair: hi.2,
        pairs_checked: n * (n - 1) / 2,
        violation,
    })
}
