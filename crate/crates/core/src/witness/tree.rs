use num_bigint::BigInt;
use num_traits::One;

use super::{bend, check_ball, check_dims, coords, scale, sub, EmbeddingCertificate, WitnessViolation};
use crate::error::{Error, Result};
use crate::families::{RecursiveGraph, Recursion};
use crate::points::{Norm, PointSet};
use crate::rational::Rational;

/// `x_1, ..., x_(2^(N+1) - 1)` with `x_i = (x_2i + x_2i+1) / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTree {
    pub depth: usize,
    pub norm: Norm,
    pub delta: Rational,
    /// `nodes[i - 1]` is `x_i`.
    pub nodes: Vec<Vec<Rational>>,
}

impl WitnessTree {
    pub fn node_count(depth: usize) -> usize {
        (1usize << (depth + 1)) - 1
    }

    pub fn node(&self, i: usize) -> &[Rational] {
        &self.nodes[i - 1]
    }

    /// Midpoint identities, `||x_2i - x_i|| = ||x_2i+1 - x_i|| >= delta`, and
    /// `||x_i|| <= 1`, all exact.
    pub fn check(&self, delta: &Rational) -> Result<(), WitnessViolation> {
        let expected = Self::node_count(self.depth);
        if self.nodes.len() != expected {
            return Err(WitnessViolation::Shape { expected, found: self.nodes.len() });
        }
        check_dims(&self.nodes)?;
        let two = Rational::from_integer(BigInt::from(2));
        for i in 1..(1usize << self.depth) {
            let (x, left, right) = (self.node(i), self.node(2 * i), self.node(2 * i + 1));
            if x.iter().zip(left).zip(right).any(|((p, a), b)| &(p * &two) != &(a + b)) {
                return Err(WitnessViolation::Averaging { index: i });
            }
            if !self.norm.at_least(&sub(left, x), delta) || !self.norm.at_least(&sub(right, x), delta) {
                return Err(WitnessViolation::Separation { index: i });
            }
        }
        check_ball(self.norm, &self.nodes)
    }
}

/// Delta-tree of depth `N` from an embedding of `D_N` keyed by the diamond
/// generator's vertex IDs. `x_1 = f(v0) - f(u0)`; the children of the node
/// for edge `u -> v` at depth `k` are `2^(k+1) (f(v) - f(w))` and
/// `2^(k+1) (f(w) - f(u))`.
pub fn extract_delta_tree(f: &PointSet, diamond: &RecursiveGraph, cert: &EmbeddingCertificate) -> Result<WitnessTree> {
    if diamond.kind() != Recursion::Diamond {
        return Err(Error::InvalidParameter("delta-tree extraction needs a diamond graph".into()));
    }
    cert.require_normalized()?;
    for v in 0..diamond.graph().n() {
        coords(f, v)?;
    }
    let depth = diamond.level();
    let index = diamond.refinement_index();
    let (u0, v0) = (0usize, 1usize);
    let mut nodes = Vec::with_capacity(WitnessTree::node_count(depth));
    nodes.push(sub(coords(f, v0)?, coords(f, u0)?));
    let mut frontier = vec![(u0, v0)];
    for k in 0..depth {
        let s = Rational::from_integer(BigInt::one() << (k + 1));
        let mut next = Vec::with_capacity(frontier.len() * 2);
        let mut children = Vec::with_capacity(frontier.len() * 2);
        for &(u, v) in &frontier {
            let r = index[&(u.min(v), u.max(v))];
            let (a, b) = (r.inserted[0], r.inserted[1]);
            let (fu, fv) = (coords(f, u)?, coords(f, v)?);
            let (fa, fb) = (coords(f, a)?, coords(f, b)?);
            let w = if f.norm().measure(&bend(fu, fa, fv)) >= f.norm().measure(&bend(fu, fb, fv)) { a } else { b };
            let fw = coords(f, w)?;
            children.push(scale(&sub(fv, fw), &s));
            children.push(scale(&sub(fw, fu), &s));
            next.push((w, v));
            next.push((u, w));
        }
        nodes.extend(children);
        frontier = next;
    }
    Ok(WitnessTree { depth, norm: f.norm(), delta: cert.delta.clone(), nodes })
}
