use num_bigint::BigInt;
use num_traits::One;

use super::{add, bend, check_ball, check_dims, coords, scale, sub, EmbeddingCertificate, WitnessViolation};
use crate::error::{Error, Result};
use crate::families::{RecursiveGraph, Recursion};
use crate::points::{Norm, PointSet};
use crate::rational::Rational;

/// `x_1, ..., x_((4^(N+1) - 1) / 3)` with
/// `x_i = (x_(4i-2) + x_(4i-1) + x_4i + x_(4i+1)) / 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSemitree {
    pub depth: usize,
    pub norm: Norm,
    pub delta: Rational,
    /// `nodes[i - 1]` is `x_i`.
    pub nodes: Vec<Vec<Rational>>,
}

impl WitnessSemitree {
    pub fn node_count(depth: usize) -> usize {
        ((1usize << (2 * (depth + 1))) - 1) / 3
    }

    /// Index range of depth `k`: `(4^k - 1)/3 + 1 ..= (4^(k+1) - 1)/3`.
    pub fn level_range(k: usize) -> std::ops::RangeInclusive<usize> {
        let start = if k == 0 { 1 } else { Self::node_count(k - 1) + 1 };
        start..=Self::node_count(k)
    }

    pub fn node(&self, i: usize) -> &[Rational] {
        &self.nodes[i - 1]
    }

    pub fn children(&self, i: usize) -> [&[Rational]; 4] {
        [self.node(4 * i - 2), self.node(4 * i - 1), self.node(4 * i), self.node(4 * i + 1)]
    }

    /// `(x_(4i-2) + x_(4i-1)) - (x_4i + x_(4i+1))`
    pub fn split(&self, i: usize) -> Vec<Rational> {
        let [a, b, c, d] = self.children(i);
        sub(&add(a, b), &add(c, d))
    }

    /// Averaging identities, `||split(i)|| >= delta`, and `||x_i|| <= 1`.
    pub fn check(&self, delta: &Rational) -> Result<(), WitnessViolation> {
        let expected = Self::node_count(self.depth);
        if self.nodes.len() != expected {
            return Err(WitnessViolation::Shape { expected, found: self.nodes.len() });
        }
        check_dims(&self.nodes)?;
        let four = Rational::from_integer(BigInt::from(4));
        let internal = if self.depth == 0 { 0 } else { Self::node_count(self.depth - 1) };
        for i in 1..=internal {
            let x = self.node(i);
            let [a, b, c, d] = self.children(i);
            let averaged = (0..x.len()).all(|k| &x[k] * &four == &a[k] + &b[k] + &c[k] + &d[k]);
            if !averaged {
                return Err(WitnessViolation::Averaging { index: i });
            }
            if !self.norm.at_least(&self.split(i), delta) {
                return Err(WitnessViolation::Separation { index: i });
            }
        }
        check_ball(self.norm, &self.nodes)
    }
}

/// Delta-semitree of depth `N` from an embedding of `L_N` keyed by the Laakso
/// generator's vertex IDs. `x_1 = f(v0) - f(u0)`; the node for edge `u -> v`
/// at depth `k` has children `4^(k+1)` times `f(v) - f(t2)`, `f(t2) - f(o)`,
/// `f(o) - f(t1)`, `f(t1) - f(u)`.
///
/// The splits satisfy `||split(i)|| >= 2 delta`, twice what the definition asks.
pub fn extract_semitree(f: &PointSet, laakso: &RecursiveGraph, cert: &EmbeddingCertificate) -> Result<WitnessSemitree> {
    if laakso.kind() != Recursion::Laakso {
        return Err(Error::InvalidParameter("semitree extraction needs a Laakso graph".into()));
    }
    cert.require_normalized()?;
    for v in 0..laakso.graph().n() {
        coords(f, v)?;
    }
    let depth = laakso.level();
    let index = laakso.refinement_index();
    let (u0, v0) = (0usize, 1usize);
    let mut nodes = Vec::with_capacity(WitnessSemitree::node_count(depth));
    nodes.push(sub(coords(f, v0)?, coords(f, u0)?));
    let mut frontier = vec![(u0, v0)];
    for k in 0..depth {
        let s = Rational::from_integer(BigInt::one() << (2 * (k + 1)));
        let mut next = Vec::with_capacity(frontier.len() * 4);
        for &(u, v) in &frontier {
            let r = index[&(u.min(v), u.max(v))];
            let [t1, o1, o2, t2] = [r.inserted[0], r.inserted[1], r.inserted[2], r.inserted[3]];
            // t1 hangs off the tail of the recorded edge
            let (t1, t2) = if r.tail == u { (t1, t2) } else { (t2, t1) };
            let (fu, fv) = (coords(f, u)?, coords(f, v)?);
            let (f1, f2) = (coords(f, o1)?, coords(f, o2)?);
            let o = if f.norm().measure(&bend(fu, f1, fv)) >= f.norm().measure(&bend(fu, f2, fv)) { o1 } else { o2 };
            let path = [v, t2, o, t1, u];
            for w in path.windows(2) {
                nodes.push(scale(&sub(coords(f, w[0])?, coords(f, w[1])?), &s));
                next.push((w[1], w[0]));
            }
        }
        frontier = next;
    }
    Ok(WitnessSemitree { depth, norm: f.norm(), delta: cert.delta.clone(), nodes })
}
