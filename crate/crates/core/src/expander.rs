//! Planting an isometric copy of a bounded-degree graph inside a regular
//! graph, and expansion diagnostics.
//!
//! The copy goes onto a set of base vertices at pairwise distance at least
//! `diam(M)`. Overlay edges join the images of adjacent `M` vertices, and
//! self-loops then pad every degree up to `d + 3`. A loop counts 1 towards
//! the degree of its vertex.

use std::collections::{BTreeMap, HashSet};

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distortion::{is_isometric, VertexMap};
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHABLE};
use crate::metric::{apsp, metric_among};
use crate::rational::{self, format_rational, Rational};

/// Pairing-model attempts before giving up on a seed.
pub const PAIRING_ATTEMPTS: usize = 2000;
/// Largest graph for the dense eigensolve.
pub const DENSE_EIGEN_CAP: usize = 2048;
/// Largest graph for exhaustive cut enumeration.
pub const CHEEGER_CAP: usize = 14;

/// Simple `d`-regular graph on `n` vertices from the pairing model, rejecting
/// pairings with loops or repeated edges. Deterministic in `seed`.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    random_regular_with(n, d, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn random_regular_with(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if d == 0 || d >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= d < n, got n = {n}, d = {d}")));
    }
    if n * d % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n * d = {} is odd", n * d)));
    }
    if n > crate::DEFAULT_VERTEX_CAP {
        return Err(Error::SizeCap { requested: n as u128, cap: crate::DEFAULT_VERTEX_CAP });
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        stubs.shuffle(rng);
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                continue 'attempt;
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Graph::simple(n, edges);
    }
    Err(Error::RejectionBudget(PAIRING_ATTEMPTS))
}

/// Greedy search came up short.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shortfall {
    pub achieved: usize,
    pub chosen: Vec<usize>,
}

/// Scans vertices in ID order, keeping each one at distance `>= min_distance`
/// from everything kept so far, until `count` are found.
pub fn greedy_separated_set(g: &Graph, min_distance: u32, count: usize) -> Result<Vec<usize>, Shortfall> {
    let adj = g.adjacency();
    let mut blocked = vec![false; g.n()];
    let mut chosen = Vec::with_capacity(count);
    if count == 0 {
        return Ok(chosen);
    }
    let radius = min_distance.max(1) - 1;
    for v in 0..g.n() {
        if blocked[v] {
            continue;
        }
        chosen.push(v);
        if chosen.len() == count {
            return Ok(chosen);
        }
        for (w, d) in adj.bfs_bounded(v, radius).into_iter().enumerate() {
            if d != UNREACHABLE {
                blocked[w] = true;
            }
        }
    }
    Err(Shortfall { achieved: chosen.len(), chosen })
}

#[derive(Clone, Debug)]
pub struct Augmented {
    pub graph: Graph,
    /// `M` vertex -> base vertex
    pub copy_map: VertexMap,
    pub base_degree: usize,
    /// Required pairwise base distance, `diam(M)`.
    pub separation: u32,
    pub overlay_edges: usize,
    /// Overlay edges already present in the base (only possible when `diam(M) = 1`).
    pub overlay_already_present: usize,
    pub max_degree_before_loops: usize,
}

fn regular_degree(g: &Graph) -> Result<usize> {
    let degrees = g.degrees();
    let d = degrees.first().copied().unwrap_or(0);
    if let Some((v, &dv)) = degrees.iter().enumerate().find(|(_, &dv)| dv != d) {
        return Err(Error::NotRegular { vertex: v, degree: dv, expected: d });
    }
    Ok(d)
}

/// Plants `m` into `base` and pads with loops to a `(d + 3)`-regular graph.
pub fn augment(base: &Graph, m: &Graph) -> Result<Augmented> {
    if !base.has_unit_length() {
        return Err(Error::NotUnitLength(format_rational(base.unit())));
    }
    if !m.has_unit_length() {
        return Err(Error::NotUnitLength(format_rational(m.unit())));
    }
    if !base.loops().is_empty() {
        return Err(Error::InvalidGraph("base graph must not carry loops".into()));
    }
    let d = regular_degree(base)?;
    let m_degrees = m.degrees();
    if let Some((v, &dv)) = m_degrees.iter().enumerate().find(|(_, &dv)| dv > 3) {
        return Err(Error::DegreeTooLarge { vertex: v, degree: dv, max: 3 });
    }
    let separation = if m.n() > 1 { apsp(m)?.diameter() } else { 1 };
    let chosen = greedy_separated_set(base, separation, m.n()).map_err(|s| Error::SeparatedSetNotFound {
        achieved: s.achieved,
        needed: m.n(),
        separation,
        base_n: base.n(),
    })?;
    let copy_map = VertexMap::from_pairs(chosen.iter().copied().enumerate())?;
    let existing: HashSet<(usize, usize)> = base.edges().iter().copied().collect();
    let mut edges = base.edges().to_vec();
    let mut already = 0;
    for &(a, b) in m.edges() {
        let (x, y) = (chosen[a], chosen[b]);
        if existing.contains(&(x.min(y), x.max(y))) {
            already += 1;
        } else {
            edges.push((x, y));
        }
    }
    let without_loops = Graph::simple(base.n(), edges.iter().copied())?;
    let degrees = without_loops.degrees();
    let max_degree_before_loops = degrees.iter().copied().max().unwrap_or(0);
    let target = d + 3;
    let loops = degrees.iter().enumerate().flat_map(|(v, &dv)| std::iter::repeat_n(v, target - dv));
    let graph = Graph::from_edges(base.n(), Rational::one(), edges, loops)?;
    Ok(Augmented {
        graph,
        copy_map,
        base_degree: d,
        separation,
        overlay_edges: m.edge_count() - already,
        overlay_already_present: already,
        max_degree_before_loops,
    })
}

#[derive(Clone, Debug)]
pub struct Planted {
    pub base: Graph,
    pub augmented: Augmented,
    /// Number of base sizes tried (1 if the first one worked).
    pub attempts: usize,
}

/// Draws a random `d`-regular base on `base_n` vertices and plants `m`; when
/// no separated set exists, doubles the base size (fresh random stream) up
/// to `max_doublings` times.
pub fn plant(base_n: usize, d: usize, seed: u64, m: &Graph, max_doublings: usize) -> Result<Planted> {
    let mut last = None;
    for k in 0..=max_doublings {
        let n = base_n
            .checked_shl(k as u32)
            .filter(|&n| n <= crate::DEFAULT_VERTEX_CAP)
            .ok_or(Error::SizeCap { requested: (base_n as u128) << k, cap: crate::DEFAULT_VERTEX_CAP })?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let base = random_regular_with(n, d, &mut rng)?;
        match augment(&base, m) {
            Ok(augmented) => return Ok(Planted { base, augmented, attempts: k + 1 }),
            Err(e @ Error::SeparatedSetNotFound { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `None` when the planted copy is isometric to `m`, otherwise the first
/// pair of `m` vertices whose distance changed.
pub fn certify_isometric_copy(k: &Graph, copy_map: &VertexMap, m: &Graph) -> Result<Option<(usize, usize)>> {
    let source = apsp(m)?;
    let images: Vec<usize> = (0..m.n()).map(|v| copy_map.get(v).ok_or(Error::NotTotal(v))).collect::<Result<_>>()?;
    let target = metric_among(k, &images)?;
    is_isometric(&VertexMap::identity(m.n()), &source, &target)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    /// Second largest eigenvalue of `D^-1/2 A D^-1/2`; absent above [`DENSE_EIGEN_CAP`].
    pub lambda2: Option<f64>,
    /// Exact edge expansion; absent above [`CHEEGER_CAP`] vertices.
    #[serde(with = "rational::serde_report::option")]
    pub cheeger_exact: Option<Rational>,
    pub degree_histogram: BTreeMap<usize, usize>,
}

pub fn expansion_report(g: &Graph) -> Result<SpectralReport> {
    if !g.is_connected() {
        return Err(Error::InvalidGraph("expansion report needs a connected graph".into()));
    }
    let mut degree_histogram = BTreeMap::new();
    for d in g.degrees() {
        *degree_histogram.entry(d).or_insert(0) += 1;
    }
    Ok(SpectralReport { n: g.n(), lambda2: lambda2(g), cheeger_exact: cheeger_exact(g), degree_histogram })
}

/// Loops sit on the diagonal with weight 1, matching the degree convention.
pub fn lambda2(g: &Graph) -> Option<f64> {
    let n = g.n();
    if !(2..=DENSE_EIGEN_CAP).contains(&n) {
        return None;
    }
    let degrees = g.degrees();
    if degrees.contains(&0) {
        return None;
    }
    let scale: Vec<f64> = degrees.iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for &(u, v) in g.edges() {
        let w = scale[u] * scale[v];
        a[(u, v)] += w;
        a[(v, u)] += w;
    }
    for &v in g.loops() {
        a[(v, v)] += scale[v] * scale[v];
    }
    let mut eig: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Some(eig[1])
}

/// `min |E(S, S^c)| / |S|` over nonempty `S` with `|S| <= n / 2`. Loops never
/// cross a cut.
pub fn cheeger_exact(g: &Graph) -> Option<Rational> {
    let n = g.n();
    if !(2..=CHEEGER_CAP).contains(&n) {
        return None;
    }
    let mut nbr = vec![0u32; n];
    for &(u, v) in g.edges() {
        nbr[u] |= 1 << v;
        nbr[v] |= 1 << u;
    }
    let mut best: Option<(u32, u32)> = None;
    for set in 1u32..(1 << n) {
        let size = set.count_ones();
        if size as usize > n / 2 {
            continue;
        }
        let cut: u32 = (0..n).filter(|&v| set >> v & 1 == 1).map(|v| (nbr[v] & !set).count_ones()).sum();
        if best.map_or(true, |(c, s)| cut * s < c * size) {
            best = Some((cut, size));
        }
    }
    best.map(|(c, s)| Rational::new(BigInt::from(c), BigInt::from(s)))
}
