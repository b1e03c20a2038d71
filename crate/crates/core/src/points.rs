//! Point sets in `l1`, `l2` and `linf`, with exact pairwise distances.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    /// Whether [`Norm::measure`] reports squared lengths.
    pub fn is_squared(self) -> bool {
        self == Norm::L2
    }

    /// Exact comparable length: the norm for `l1`/`linf`, its square for `l2`.
    pub fn measure(self, v: &[Rational]) -> Rational {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.iter().map(|x| x * x).sum(),
            Norm::Linf => v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero),
        }
    }

    /// `length` lifted to the scale of [`Norm::measure`].
    pub fn lift(self, length: &Rational) -> Rational {
        if self.is_squared() {
            length * length
        } else {
            length.clone()
        }
    }

    /// `||v|| >= threshold`, exactly.
    pub fn at_least(self, v: &[Rational], threshold: &Rational) -> bool {
        self.measure(v) >= self.lift(threshold)
    }

    /// `||v|| <= bound`, exactly.
    pub fn at_most(self, v: &[Rational], bound: &Rational) -> bool {
        self.measure(v) <= self.lift(bound)
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        })
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" => Ok(Norm::Linf),
            other => Err(Error::schema("norm", format!("expected l1, l2 or linf, got {other:?}"))),
        }
    }
}

/// Map from vertex ID to a coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    norm: Norm,
    points: BTreeMap<usize, Vec<Rational>>,
}

impl PointSet {
    pub fn new(dim: usize, norm: Norm, points: BTreeMap<usize, Vec<Rational>>) -> Result<Self> {
        if let Some((&id, v)) = points.iter().find(|(_, v)| v.len() != dim) {
            return Err(Error::DimensionMismatch { id, expected: dim, found: v.len() });
        }
        Ok(PointSet { dim, norm, points })
    }

    pub fn from_integer_rows(norm: Norm, rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let points = rows
            .iter()
            .enumerate()
            .map(|(id, row)| (id, row.iter().map(|&x| Rational::from_integer(x.into())).collect()))
            .collect();
        Self::new(dim, norm, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&[Rational]> {
        self.points.get(&id).map(Vec::as_slice)
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.points.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[Rational])> {
        self.points.iter().map(|(&id, v)| (id, v.as_slice()))
    }

    pub fn with_norm(&self, norm: Norm) -> Self {
        PointSet { norm, ..self.clone() }
    }

    /// Multiplies every coordinate by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        let points = self.points.iter().map(|(&id, v)| (id, v.iter().map(|x| x * factor).collect())).collect();
        PointSet { dim: self.dim, norm: self.norm, points }
    }

    pub fn difference(&self, a: usize, b: usize) -> Result<Vec<Rational>> {
        let pa = self.get(a).ok_or(Error::MissingCoordinates(a))?;
        let pb = self.get(b).ok_or(Error::MissingCoordinates(b))?;
        Ok(pa.iter().zip(pb).map(|(x, y)| x - y).collect())
    }

    /// Integer coordinates over a shared denominator, when everything fits in
    /// `i64`. Returns the rows (in ID order) and the denominator.
    fn common_lattice(&self) -> Option<(Vec<Vec<i64>>, BigInt)> {
        let mut lcm = BigInt::one();
        for v in self.points.values() {
            for x in v {
                lcm = lcm.lcm(x.denom());
            }
        }
        let limit = BigInt::from(1i64 << 62);
        if lcm > limit {
            return None;
        }
        let mut rows = Vec::with_capacity(self.points.len());
        for v in self.points.values() {
            let mut row = Vec::with_capacity(v.len());
            for x in v {
                let scaled = x.numer() * (&lcm / x.denom());
                if scaled.abs() > limit {
                    return None;
                }
                row.push(scaled.to_i64()?);
            }
            rows.push(row);
        }
        Some((rows, lcm))
    }
}

/// Exact pairwise distances among labelled points.
///
/// For `l2` the table holds squared distances and `squared` is set.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    ids: Vec<usize>,
    squared: bool,
    values: TableValues,
}

#[derive(Clone, Debug)]
pub(crate) enum TableValues {
    /// `numer[i*n + j] * scale`
    Lattice { numer: Vec<u128>, scale: Rational },
    Exact(Vec<Rational>),
}

impl DistanceTable {
    pub(crate) fn lattice(ids: Vec<usize>, numer: Vec<u128>, scale: Rational, squared: bool) -> Self {
        DistanceTable { ids, squared, values: TableValues::Lattice { numer, scale } }
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn is_squared(&self) -> bool {
        self.squared
    }

    pub fn index_of(&self, id: usize) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    /// Distance (squared for `l2`) between table rows `i` and `j`.
    pub fn get(&self, i: usize, j: usize) -> Rational {
        let n = self.ids.len();
        match &self.values {
            TableValues::Lattice { numer, scale } => scale * Rational::from_integer(numer[i * n + j].into()),
            TableValues::Exact(v) => v[i * n + j].clone(),
        }
    }

    pub(crate) fn values(&self) -> &TableValues {
        &self.values
    }
}

/// Pairwise norm distances of all points, in ID order.
pub fn point_metric(p: &PointSet) -> Result<DistanceTable> {
    let ids: Vec<usize> = p.ids().collect();
    let n = ids.len();
    let squared = p.norm.is_squared();
    if let Some((rows, denom)) = p.common_lattice() {
        if let Some(numer) = lattice_distances(&rows, p.norm) {
            let base = Rational::new(BigInt::one(), denom);
            let scale = if squared { &base * &base } else { base };
            return Ok(DistanceTable::lattice(ids, numer, scale, squared));
        }
    }
    let vectors: Vec<&Vec<Rational>> = p.points.values().collect();
    let values: Vec<Rational> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let diff: Vec<Rational> = vectors[i].iter().zip(vectors[j]).map(|(x, y)| x - y).collect();
            p.norm.measure(&diff)
        })
        .collect();
    Ok(DistanceTable { ids, squared, values: TableValues::Exact(values) })
}

fn lattice_distances(rows: &[Vec<i64>], norm: Norm) -> Option<Vec<u128>> {
    let n = rows.len();
    let out: Vec<Option<u128>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (&rows[k / n], &rows[k % n]);
            let mut acc: u128 = 0;
            for (x, y) in a.iter().zip(b) {
                let d = (*x as i128 - *y as i128).unsigned_abs();
                acc = match norm {
                    Norm::L1 => acc.checked_add(d)?,
                    Norm::Linf => acc.max(d),
                    Norm::L2 => acc.checked_add(d.checked_mul(d)?)?,
                };
            }
            Some(acc)
        })
        .collect();
    out.into_iter().collect()
}
