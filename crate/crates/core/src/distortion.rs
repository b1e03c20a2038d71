//! Vertex maps and exact bilipschitz constants.
//!
//! For a map `f` from a metric `X` into `Y` the report carries the best
//! constants `lower <= d_Y(f(x), f(y)) / d_X(x, y) <= upper` over all pairs,
//! and `distortion = upper / lower`. Under `l2` every ratio is squared and
//! the report says so.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::ScaledMetric;
use crate::points::{point_metric, PointSet, TableValues};
use crate::rational::{self, to_u128_exact, Rational};

/// Injective map between vertex sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexMap {
    pairs: BTreeMap<usize, usize>,
}

impl VertexMap {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut forward = BTreeMap::new();
        let mut backward: BTreeMap<usize, usize> = BTreeMap::new();
        for (s, t) in pairs {
            if let Some(&prev) = forward.get(&s) {
                if prev != t {
                    return Err(Error::InvalidParameter(format!("vertex {s} mapped to both {prev} and {t}")));
                }
                continue;
            }
            if let Some(&other) = backward.get(&t) {
                return Err(Error::NonInjective { first: other, second: s, target: t });
            }
            forward.insert(s, t);
            backward.insert(t, s);
        }
        Ok(VertexMap { pairs: forward })
    }

    pub fn identity(n: usize) -> Self {
        VertexMap { pairs: (0..n).map(|i| (i, i)).collect() }
    }

    pub fn get(&self, source: usize) -> Option<usize> {
        self.pairs.get(&source).copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|(&s, &t)| (s, t))
    }

    /// `next` after `self`; defined where both steps are.
    pub fn then(&self, next: &VertexMap) -> Result<VertexMap> {
        let mut out = Vec::with_capacity(self.len());
        for (s, t) in self.iter() {
            out.push((s, next.get(t).ok_or(Error::NotTotal(t))?));
        }
        VertexMap::from_pairs(out)
    }

    /// Image of `0..n`, failing if some point is unmapped.
    fn images(&self, n: usize, target_len: usize) -> Result<Vec<usize>> {
        (0..n)
            .map(|i| {
                let t = self.get(i).ok_or(Error::NotTotal(i))?;
                if t >= target_len {
                    return Err(Error::OutOfRange { source_id: i, target: t, len: target_len });
                }
                Ok(t)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistortionReport {
    #[serde(with = "rational::serde_report")]
    pub lower: Rational,
    #[serde(with = "rational::serde_report")]
    pub upper: Rational,
    #[serde(with = "rational::serde_report")]
    pub distortion: Rational,
    /// Ratios (and therefore all three constants) are squared.
    pub squared: bool,
    pub witness_pair_lower: (usize, usize),
    pub witness_pair_upper: (usize, usize),
    pub pairs_checked: usize,
}

/// Distortion of `f` between two shortest-path metrics.
pub fn distortion(f: &VertexMap, source: &ScaledMetric, target: &ScaledMetric) -> Result<DistortionReport> {
    check_injective_on(f, source.len())?;
    let images = f.images(source.len(), target.len())?;
    let numer = |i: usize, j: usize| target.get(images[i], images[j]) as u128;
    extremal(source, Target::Lattice { numer: &numer, scale: target.unit().clone() }, false)
}

/// Distortion of the embedding `points` (keyed by vertex ID of `source`).
pub fn embedding_distortion(points: &PointSet, source: &ScaledMetric) -> Result<DistortionReport> {
    for i in 0..source.len() {
        if points.get(i).is_none() {
            return Err(Error::MissingCoordinates(i));
        }
    }
    let table = point_metric(points)?;
    let rows: Vec<usize> = (0..source.len()).map(|i| table.index_of(i).expect("checked above")).collect();
    let squared = table.is_squared();
    match table.values() {
        TableValues::Lattice { numer, scale } => {
            let n = table.len();
            let get = |i: usize, j: usize| numer[rows[i] * n + rows[j]];
            extremal(source, Target::Lattice { numer: &get, scale: scale.clone() }, squared)
        }
        TableValues::Exact(_) => {
            let get = |i: usize, j: usize| table.get(rows[i], rows[j]);
            extremal(source, Target::Exact(&get), squared)
        }
    }
}

fn check_injective_on(f: &VertexMap, n: usize) -> Result<()> {
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        let t = f.get(i).ok_or(Error::NotTotal(i))?;
        if let Some(&j) = seen.get(&t) {
            return Err(Error::NonInjective { first: j, second: i, target: t });
        }
        seen.insert(t, i);
    }
    Ok(())
}

enum Target<'a> {
    /// target distance = numer(i, j) * scale
    Lattice { numer: &'a (dyn Fn(usize, usize) -> u128 + Sync), scale: Rational },
    Exact(&'a (dyn Fn(usize, usize) -> Rational + Sync)),
}

/// Exact ratio `a / b` of non-negative integers.
#[derive(Clone, Copy)]
struct IntRatio {
    a: u128,
    b: u128,
}

impl IntRatio {
    fn cmp(&self, other: &IntRatio) -> Ordering {
        match (self.a.checked_mul(other.b), other.a.checked_mul(self.b)) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => (BigUint::from(self.a) * BigUint::from(other.b)).cmp(&(BigUint::from(other.a) * BigUint::from(self.b))),
        }
    }

    fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.a), BigInt::from(self.b))
    }
}

fn extremal(source: &ScaledMetric, target: Target<'_>, squared: bool) -> Result<DistortionReport> {
    let n = source.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let unit = source.unit();
    let source_scale = if squared { unit * unit } else { unit.clone() };
    let pairs_checked = n * (n - 1) / 2;
    let (lower, upper, lo_pair, hi_pair) = match target {
        Target::Lattice { numer, scale } => {
            let mut best: Option<(IntRatio, (usize, usize), IntRatio, (usize, usize))> = None;
            for i in 0..n {
                for j in (i + 1)..n {
                    let a = numer(i, j);
                    if a == 0 {
                        return Err(Error::Collapsed(i, j));
                    }
                    let k = source.get(i, j) as u128;
                    let r = IntRatio { a, b: if squared { k * k } else { k } };
                    best = Some(match best {
                        None => (r, (i, j), r, (i, j)),
                        Some((lo, lp, hi, hp)) => {
                            let (lo, lp) = if r.cmp(&lo) == Ordering::Less { (r, (i, j)) } else { (lo, lp) };
                            let (hi, hp) = if r.cmp(&hi) == Ordering::Greater { (r, (i, j)) } else { (hi, hp) };
                            (lo, lp, hi, hp)
                        }
                    });
                }
            }
            let (lo, lp, hi, hp) = best.expect("n >= 2");
            let factor = &scale / &source_scale;
            (lo.to_rational() * &factor, hi.to_rational() * &factor, lp, hp)
        }
        Target::Exact(get) => {
            let mut best: Option<(Rational, (usize, usize), Rational, (usize, usize))> = None;
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = get(i, j);
                    if d.is_zero() {
                        return Err(Error::Collapsed(i, j));
                    }
                    let k = Rational::from_integer(source.get(i, j).into());
                    let k = if squared { &k * &k } else { k };
                    let r = d / (k * &source_scale);
                    best = Some(match best {
                        None => (r.clone(), (i, j), r, (i, j)),
                        Some((lo, lp, hi, hp)) => {
                            let (lo, lp) = if r < lo { (r.clone(), (i, j)) } else { (lo, lp) };
                            let (hi, hp) = if r > hi { (r, (i, j)) } else { (hi, hp) };
                            (lo, lp, hi, hp)
                        }
                    });
                }
            }
            best.map(|(lo, lp, hi, hp)| (lo, hi, lp, hp)).expect("n >= 2")
        }
    };
    let distortion = &upper / &lower;
    Ok(DistortionReport {
        lower,
        upper,
        distortion,
        squared,
        witness_pair_lower: lo_pair,
        witness_pair_upper: hi_pair,
        pairs_checked,
    })
}

/// `None` when `f` preserves every distance exactly (after unit conversion),
/// otherwise the first violating pair of `m1` points.
pub fn is_isometric(f: &VertexMap, m1: &ScaledMetric, m2: &ScaledMetric) -> Result<Option<(usize, usize)>> {
    check_injective_on(f, m1.len())?;
    let images = f.images(m1.len(), m2.len())?;
    // d1 * u1 == d2 * u2  <=>  d1 * p == d2 * q  with u1 / u2 = p / q
    let ratio = m1.unit() / m2.unit();
    let small = to_u128_exact(ratio.numer()).zip(to_u128_exact(ratio.denom()));
    let n = m1.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let d1 = m1.get(i, j) as u128;
            let d2 = m2.get(images[i], images[j]) as u128;
            let equal = match small.and_then(|(p, q)| Some((d1.checked_mul(p)?, d2.checked_mul(q)?))) {
                Some((l, r)) => l == r,
                None => BigInt::from(d1) * ratio.numer() == BigInt::from(d2) * ratio.denom(),
            };
            if !equal {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

impl DistortionReport {
    pub fn is_isometry(&self) -> bool {
        self.lower.is_one() && self.upper.is_one()
    }
}
