//! Generators for the graph families.
//!
//! Diamond and Laakso graphs are built by repeated edge replacement. Edges of
//! each level are processed in sorted order of their oriented form, and new
//! vertices are appended, so every vertex of level `n - 1` keeps its ID in
//! level `n`. The replacement records are kept: witness extraction walks
//! them to find the quadrilateral (or Laakso gadget) refining a given edge.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::distortion::VertexMap;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Recursion {
    Diamond,
    Laakso,
}

impl Recursion {
    /// New vertices inserted per replaced edge.
    pub fn inserted_per_edge(self) -> usize {
        match self {
            Recursion::Diamond => 2,
            Recursion::Laakso => 4,
        }
    }

    /// Edges produced per replaced edge.
    pub fn edges_per_edge(self) -> usize {
        match self {
            Recursion::Diamond => 4,
            Recursion::Laakso => 6,
        }
    }

    /// Edge length shrinks by this factor per level.
    pub fn shrink(self) -> u32 {
        match self {
            Recursion::Diamond => 2,
            Recursion::Laakso => 4,
        }
    }

    pub fn unit(self, level: usize) -> Rational {
        let denom = BigInt::from(self.shrink()).pow(level as u32);
        Rational::new(BigInt::one(), denom)
    }

    /// `(vertices, edges)` at `level`, or `None` on overflow.
    pub fn size(self, level: usize) -> Option<(u128, u128)> {
        let (mut v, mut e): (u128, u128) = (2, 1);
        for _ in 0..level {
            v = v.checked_add(e.checked_mul(self.inserted_per_edge() as u128)?)?;
            e = e.checked_mul(self.edges_per_edge() as u128)?;
        }
        Some((v, e))
    }
}

/// One replaced edge: `tail -> head` became the listed new vertices.
///
/// Diamond: `[a, b]`, the quadrilateral `tail, a, head, b`.
/// Laakso: `[t1, o1, o2, t2]` with `t1` next to `tail` and `t2` next to `head`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub tail: usize,
    pub head: usize,
    pub inserted: Vec<usize>,
}

/// A level of a diamond or Laakso family together with its construction
/// history.
#[derive(Clone, Debug)]
pub struct RecursiveGraph {
    kind: Recursion,
    graph: Graph,
    /// `refinements[i]` turns level `i` into level `i + 1`.
    refinements: Vec<Vec<Refinement>>,
    level_sizes: Vec<usize>,
}

impl RecursiveGraph {
    pub fn build(kind: Recursion, level: usize, cap: usize) -> Result<Self> {
        let (v, _) = kind.size(level).ok_or(Error::SizeCap { requested: u128::MAX, cap })?;
        if v > cap as u128 {
            return Err(Error::SizeCap { requested: v, cap });
        }
        let mut oriented = vec![(0usize, 1usize)];
        let mut next = 2usize;
        let mut refinements = Vec::with_capacity(level);
        let mut level_sizes = vec![2];
        for _ in 0..level {
            oriented.sort_unstable();
            let mut produced = Vec::with_capacity(oriented.len() * kind.edges_per_edge());
            let mut records = Vec::with_capacity(oriented.len());
            for &(u, v) in &oriented {
                let ids: Vec<usize> = (next..next + kind.inserted_per_edge()).collect();
                next += ids.len();
                match kind {
                    Recursion::Diamond => {
                        let (a, b) = (ids[0], ids[1]);
                        produced.extend([(u, a), (a, v), (u, b), (b, v)]);
                    }
                    Recursion::Laakso => {
                        let (t1, o1, o2, t2) = (ids[0], ids[1], ids[2], ids[3]);
                        produced.extend([(u, t1), (t1, o1), (t1, o2), (o1, t2), (o2, t2), (t2, v)]);
                    }
                }
                records.push(Refinement { tail: u, head: v, inserted: ids });
            }
            refinements.push(records);
            level_sizes.push(next);
            oriented = produced;
        }
        let graph = Graph::from_edges(next, kind.unit(level), oriented, [])?;
        Ok(RecursiveGraph { kind, graph, refinements, level_sizes })
    }

    pub fn kind(&self) -> Recursion {
        self.kind
    }

    pub fn level(&self) -> usize {
        self.refinements.len()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    /// Replacements turning level `i` into level `i + 1`.
    pub fn refinements(&self, i: usize) -> &[Refinement] {
        &self.refinements[i]
    }

    /// Vertex count of level `i <= self.level()`; those vertices are `0..count`.
    pub fn vertices_at(&self, i: usize) -> usize {
        self.level_sizes[i]
    }

    /// Every replaced edge keyed by its unordered endpoint pair.
    pub fn refinement_index(&self) -> HashMap<(usize, usize), &Refinement> {
        self.refinements
            .iter()
            .flatten()
            .map(|r| ((r.tail.min(r.head), r.tail.max(r.head)), r))
            .collect()
    }
}

pub fn diamond(level: usize) -> Result<Graph> {
    Ok(RecursiveGraph::build(Recursion::Diamond, level, crate::DEFAULT_VERTEX_CAP)?.into_graph())
}

pub fn laakso(level: usize) -> Result<Graph> {
    Ok(RecursiveGraph::build(Recursion::Laakso, level, crate::DEFAULT_VERTEX_CAP)?.into_graph())
}

/// Canonical inclusion of level `level` into level `level + 1`: the identity
/// on the preserved IDs.
pub fn level_inclusion(kind: Recursion, level: usize) -> Result<VertexMap> {
    let (v, _) = kind
        .size(level)
        .ok_or(Error::SizeCap { requested: u128::MAX, cap: crate::DEFAULT_VERTEX_CAP })?;
    Ok(VertexMap::identity(v as usize))
}

/// Hamming cube on `{0,1}^dim`; vertex ID is the binary value, bit `t` is
/// coordinate `t`.
pub fn hamming(dim: usize, cap: usize) -> Result<Graph> {
    if dim == 0 {
        return Err(Error::InvalidParameter("hamming cube needs dimension >= 1".into()));
    }
    if dim >= 64 || (1u128 << dim) > cap as u128 {
        return Err(Error::SizeCap { requested: 1u128.checked_shl(dim as u32).unwrap_or(u128::MAX), cap });
    }
    let n = 1usize << dim;
    let edges = (0..n).flat_map(|v| (0..dim).filter(move |t| v & (1 << t) == 0).map(move |t| (v, v | (1 << t))));
    Graph::simple(n, edges)
}

/// `{0..=side}^dim` with edges between points at `l_inf` distance 1.
/// Coordinate `t` is digit `t` (least significant first) in base `side + 1`.
pub fn lattice(side: usize, dim: usize, cap: usize) -> Result<Graph> {
    if side == 0 || dim == 0 {
        return Err(Error::InvalidParameter("lattice needs m >= 1 and n >= 1".into()));
    }
    let base = side + 1;
    let requested = (base as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if requested > cap as u128 {
        return Err(Error::SizeCap { requested, cap });
    }
    let n = requested as usize;
    let digits = |mut v: usize| -> Vec<usize> {
        (0..dim)
            .map(|_| {
                let d = v % base;
                v /= base;
                d
            })
            .collect()
    };
    let offsets = 3usize.pow(dim as u32);
    let mut edges = Vec::new();
    for v in 0..n {
        let coords = digits(v);
        'offset: for code in 0..offsets {
            let mut code = code;
            let mut w = 0usize;
            let mut place = 1usize;
            let mut moved = false;
            for &c in &coords {
                let step = code % 3;
                code /= 3;
                let x = match step {
                    0 => c,
                    1 if c + 1 < base => c + 1,
                    2 if c > 0 => c - 1,
                    _ => continue 'offset,
                };
                moved |= step != 0;
                w += x * place;
                place *= base;
            }
            if moved && w > v {
                edges.push((v, w));
            }
        }
    }
    Graph::simple(n, edges)
}

/// Rooted tree with its root and leaves, IDs assigned level by level.
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub graph: Graph,
    pub root: usize,
    pub leaves: Vec<usize>,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
}

impl RootedTree {
    fn grow(depth: usize, root_children: usize, children: usize) -> Result<Self> {
        let mut parent = vec![None];
        let mut level_of = vec![0usize];
        let mut frontier = vec![0usize];
        let mut edges = Vec::new();
        for d in 1..=depth {
            let mut next = Vec::new();
            for &v in &frontier {
                let k = if v == 0 { root_children } else { children };
                for _ in 0..k {
                    let c = parent.len();
                    parent.push(Some(v));
                    level_of.push(d);
                    edges.push((v, c));
                    next.push(c);
                }
            }
            frontier = next;
        }
        let graph = Graph::simple(parent.len(), edges)?;
        Ok(RootedTree { graph, root: 0, leaves: frontier, parent, depth: level_of })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

/// The rooted tree of depth `depth` whose root has 3 children and every
/// other internal vertex 2, so all internal vertices have degree 3.
pub fn tree3(depth: usize) -> Result<RootedTree> {
    if depth == 0 {
        return Err(Error::InvalidParameter("tree3 needs depth >= 1".into()));
    }
    if depth > 40 {
        return Err(Error::SizeCap { requested: 3u128 << depth, cap: crate::DEFAULT_VERTEX_CAP });
    }
    let size = 3 * (1u128 << depth) - 2;
    if size > crate::DEFAULT_VERTEX_CAP as u128 {
        return Err(Error::SizeCap { requested: size, cap: crate::DEFAULT_VERTEX_CAP });
    }
    RootedTree::grow(depth, 3, 2)
}

/// Complete binary tree of depth `depth`.
pub fn binary_tree(depth: usize) -> Result<RootedTree> {
    let size = 1u128.checked_shl(depth as u32 + 1).unwrap_or(u128::MAX) - 1;
    if size > crate::DEFAULT_VERTEX_CAP as u128 {
        return Err(Error::SizeCap { requested: size, cap: crate::DEFAULT_VERTEX_CAP });
    }
    RootedTree::grow(depth, 2, 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Diamond { level: usize },
    Laakso { level: usize },
    Hamming { dim: usize },
    Lattice { side: usize, dim: usize },
    Tree3 { depth: usize },
    BinaryTree { depth: usize },
}

impl FamilySpec {
    pub fn generate(&self, cap: usize) -> Result<Graph> {
        match *self {
            FamilySpec::Diamond { level } => Ok(RecursiveGraph::build(Recursion::Diamond, level, cap)?.into_graph()),
            FamilySpec::Laakso { level } => Ok(RecursiveGraph::build(Recursion::Laakso, level, cap)?.into_graph()),
            FamilySpec::Hamming { dim } => hamming(dim, cap),
            FamilySpec::Lattice { side, dim } => lattice(side, dim, cap),
            FamilySpec::Tree3 { depth } => Ok(tree3(depth)?.graph),
            FamilySpec::BinaryTree { depth } => Ok(binary_tree(depth)?.graph),
        }
    }
}
