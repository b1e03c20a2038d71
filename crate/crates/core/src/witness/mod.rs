//! Delta-trees and delta-semitrees extracted from embeddings of diamond and
//! Laakso graphs, and the quaternary martingale built from a semitree.
//!
//! An embedding `f` is normalized so that
//! `delta * d(x, y) <= ||f(x) - f(y)|| <= d(x, y)`. Walking the recursive
//! construction edge by edge, each refined edge `u -> v` offers candidates
//! `w` (the two opposite vertices of the diamond quadrilateral, or `o1`, `o2`
//! of the Laakso gadget); the one maximizing
//! `||(f(v) - f(w)) - (f(w) - f(u))||` is kept, ties going to the earlier
//! vertex. The children are the rescaled differences along the chosen path,
//! so parent/child identities telescope exactly.

mod martingale;
mod semitree;
mod tree;

pub use martingale::{build_martingale, certify_divergence, DivergenceReport, LevelDivergence, QuaternaryMartingale};
pub use semitree::{extract_semitree, WitnessSemitree};
pub use tree::{extract_delta_tree, WitnessTree};

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::distortion::embedding_distortion;
use crate::error::{Error, Result};
use crate::metric::ScaledMetric;
use crate::points::{Norm, PointSet};
use crate::rational::{self, format_rational, sqrt_exact, Rational};

/// Distance vectors `x_i = (d(i, 0), ..., d(i, n - 1))`, isometric in `l_inf`.
pub fn kuratowski_embed(m: &ScaledMetric) -> PointSet {
    let points: BTreeMap<usize, Vec<Rational>> = (0..m.len())
        .map(|i| (i, (0..m.len()).map(|j| m.distance(i, j)).collect()))
        .collect();
    PointSet::new(m.len(), Norm::Linf, points).expect("square table")
}

/// Constants of `delta * d <= ||f(x) - f(y)|| <= lip * d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCertificate {
    #[serde(with = "rational::serde_report")]
    pub delta: Rational,
    #[serde(with = "rational::serde_report")]
    pub lip: Rational,
}

impl EmbeddingCertificate {
    /// Best constants of `points` as given, without rescaling.
    pub fn measure(points: &PointSet, m: &ScaledMetric) -> Result<Self> {
        let rep = embedding_distortion(points, m)?;
        if rep.squared {
            let root = |q: &Rational| sqrt_exact(q).ok_or_else(|| Error::IrrationalScale(format_rational(q)));
            Ok(EmbeddingCertificate { delta: root(&rep.lower)?, lip: root(&rep.upper)? })
        } else {
            Ok(EmbeddingCertificate { delta: rep.lower, lip: rep.upper })
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.lip <= Rational::one()
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() && self.delta > Rational::zero() {
            Ok(())
        } else {
            Err(Error::NotNormalized(format_rational(&self.lip)))
        }
    }
}

/// Rescales by `1 / lip` so the upper constant becomes exactly 1; then
/// `delta = lower / upper`.
pub fn normalize_embedding(points: &PointSet, m: &ScaledMetric) -> Result<(PointSet, EmbeddingCertificate)> {
    let raw = EmbeddingCertificate::measure(points, m)?;
    let scaled = points.scaled(&(Rational::one() / &raw.lip));
    let cert = EmbeddingCertificate { delta: &raw.delta / &raw.lip, lip: Rational::one() };
    Ok((scaled, cert))
}

/// First broken condition found by a witness check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessViolation {
    Shape { expected: usize, found: usize },
    Dimension { index: usize },
    /// `x_i` is not the average of its children.
    Averaging { index: usize },
    /// Children of `x_i` are not separated by `delta`.
    Separation { index: usize },
    OutsideUnitBall { index: usize },
}

/// A delta-tree or a delta-semitree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Tree(WitnessTree),
    Semitree(WitnessSemitree),
}

impl Witness {
    pub fn check(&self, delta: &Rational) -> Result<(), WitnessViolation> {
        match self {
            Witness::Tree(t) => t.check(delta),
            Witness::Semitree(s) => s.check(delta),
        }
    }

    pub fn delta(&self) -> &Rational {
        match self {
            Witness::Tree(t) => &t.delta,
            Witness::Semitree(s) => &s.delta,
        }
    }
}

/// Checks every structural identity of `w` at `delta`.
pub fn check_witness(w: &Witness, delta: &Rational) -> Result<(), WitnessViolation> {
    w.check(delta)
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(a: &[Rational], s: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * s).collect()
}

/// `(f(v) - f(w)) - (f(w) - f(u))`
fn bend(fu: &[Rational], fw: &[Rational], fv: &[Rational]) -> Vec<Rational> {
    fu.iter().zip(fw).zip(fv).map(|((u, w), v)| v + u - w - w).collect()
}

fn coords(f: &PointSet, v: usize) -> Result<&[Rational]> {
    f.get(v).ok_or(Error::MissingCoordinates(v))
}

fn check_ball(norm: Norm, nodes: &[Vec<Rational>]) -> Result<(), WitnessViolation> {
    let one = Rational::one();
    match nodes.iter().position(|x| !norm.at_most(x, &one)) {
        Some(i) => Err(WitnessViolation::OutsideUnitBall { index: i + 1 }),
        None => Ok(()),
    }
}

fn check_dims(nodes: &[Vec<Rational>]) -> Result<(), WitnessViolation> {
    let dim = nodes.first().map_or(0, Vec::len);
    match nodes.iter().position(|x| x.len() != dim) {
        Some(i) => Err(WitnessViolation::Dimension { index: i + 1 }),
        None => Ok(()),
    }
}
