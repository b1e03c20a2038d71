use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{sub, WitnessSemitree};
use crate::error::{Error, Result};
use crate::points::Norm;
use crate::rational::{self, Rational};

/// Piecewise constant vector functions on `[0, 1]`: level `n` holds the value
/// on each of the `4^n` cells `[k / 4^n, (k + 1) / 4^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternaryMartingale {
    pub norm: Norm,
    pub levels: Vec<Vec<Vec<Rational>>>,
}

impl QuaternaryMartingale {
    pub fn new(norm: Norm, levels: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        for (n, level) in levels.iter().enumerate() {
            if level.len() != 1usize << (2 * n) {
                return Err(Error::InvalidParameter(format!("level {n} has {} cells, expected 4^{n}", level.len())));
            }
        }
        Ok(QuaternaryMartingale { norm, levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    /// First `(level, cell)` whose value is not the mean of its four children.
    pub fn averaging_violation(&self) -> Option<(usize, usize)> {
        let four = Rational::from_integer(BigInt::from(4));
        for (n, pair) in self.levels.windows(2).enumerate() {
            for (k, parent) in pair[0].iter().enumerate() {
                let kids = &pair[1][4 * k..4 * k + 4];
                let ok = (0..parent.len()).all(|c| &parent[c] * &four == kids.iter().map(|x| &x[c]).sum::<Rational>());
                if !ok {
                    return Some((n, k));
                }
            }
        }
        None
    }

    /// Largest cell value, on the [`Norm::measure`] scale.
    pub fn sup_measure(&self) -> Rational {
        self.levels.iter().flatten().map(|x| self.norm.measure(x)).max().unwrap_or_else(Rational::zero)
    }
}

/// Level `n` is the `4^n` depth-`n` semitree nodes in index order.
pub fn build_martingale(st: &WitnessSemitree) -> QuaternaryMartingale {
    let levels = (0..=st.depth)
        .map(|k| WitnessSemitree::level_range(k).map(|i| st.node(i).to_vec()).collect())
        .collect();
    QuaternaryMartingale { norm: st.norm, levels }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelDivergence {
    /// Step from level `from_level` to `from_level + 1`.
    pub from_level: usize,
    #[serde(with = "rational::serde_report")]
    pub gap_threshold: Rational,
    /// Child cells with `||f_(n+1) - f_n|| >= gap_threshold`.
    pub hits: usize,
    pub cells: usize,
    #[serde(with = "rational::serde_report")]
    pub measure_fraction: Rational,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    pub ok: bool,
    pub averaging_ok: bool,
    pub uniformly_bounded: bool,
    /// Largest `||value||` (squared under `l2`).
    #[serde(with = "rational::serde_report")]
    pub sup_measure: Rational,
    pub levels: Vec<LevelDivergence>,
}

/// For each step, the measure of `{t : ||f_n(t) - f_(n+1)(t)|| >= delta / 4}`,
/// certified against `1/2`.
pub fn certify_divergence(mg: &QuaternaryMartingale, delta: &Rational) -> DivergenceReport {
    let threshold = delta / Rational::from_integer(BigInt::from(4));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let levels: Vec<LevelDivergence> = mg
        .levels
        .windows(2)
        .enumerate()
        .map(|(n, pair)| {
            let cells = pair[1].len();
            let hits = pair[1]
                .iter()
                .enumerate()
                .filter(|(c, child)| mg.norm.at_least(&sub(child, &pair[0][c / 4]), &threshold))
                .count();
            let measure_fraction = Rational::new(BigInt::from(hits), BigInt::from(cells));
            let certified = measure_fraction >= half;
            LevelDivergence { from_level: n, gap_threshold: threshold.clone(), hits, cells, measure_fraction, certified }
        })
        .collect();
    let averaging_ok = mg.averaging_violation().is_none();
    let sup_measure = mg.sup_measure();
    let uniformly_bounded = sup_measure <= Rational::one();
    DivergenceReport {
        ok: averaging_ok && uniformly_bounded && levels.iter().all(|l| l.certified),
        averaging_ok,
        uniformly_bounded,
        sup_measure,
        levels,
    }
}
