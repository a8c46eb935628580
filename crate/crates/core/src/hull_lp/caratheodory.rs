use crate::error::{Error, Result};
use crate::model::Point;

/// Weights must sum to one within this.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

/// A convex combination `sum_k w_k x_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCombination {
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl WeightedCombination {
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(first) = points.first() {
            for p in &points {
                p.check_dim(first.dim())?;
            }
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "negative or non-finite weight {w}"
            )));
        }
        if !points.is_empty() {
            let total: f64 = weights.iter().sum();
            if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                return Err(Error::InvalidInput(format!(
                    "weights sum to {total}, not 1"
                )));
            }
        }
        Ok(WeightedCombination { points, weights })
    }

    /// The empty combination, used for queries outside a hull.
    pub fn empty() -> Self {
        WeightedCombination {
            points: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn barycenter(&self) -> Option<Point> {
        let first = self.points.first()?;
        let mut acc = vec![0.0; first.dim()];
        for (p, w) in self.points.iter().zip(&self.weights) {
            for (a, c) in acc.iter_mut().zip(p.coords()) {
                *a += w * c;
            }
        }
        Point::new(acc).ok()
    }

    /// `sum_k w_k v_k`.
    pub fn weighted_value(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Output of [`caratheodory_reduce`].
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub combination: WeightedCombination,
    /// Position of each kept point in the input combination.
    pub source: Vec<usize>,
}

/// Rewrites a convex combination in `R^n` with at most `n + 1` points of
/// strictly positive weight and the same barycenter.
///
/// Each round finds an affine dependence `sum mu_k x_k = 0`, `sum mu_k = 0` by
/// Gaussian elimination and moves along `-mu` until a weight hits zero, the
/// lowest index winning ties. When `values` are given, `mu` is oriented so that
/// `sum w_k v_k` never increases.
pub fn caratheodory_reduce(c: &WeightedCombination, values: Option<&[f64]>) -> Result<Reduction> {
    if let Some(v) = values {
        if v.len() != c.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} points",
                v.len(),
                c.len()
            )));
        }
    }
    let mut active: Vec<usize> = (0..c.len()).filter(|&k| c.weights[k] > 0.0).collect();
    let mut w: Vec<f64> = c.weights.clone();
    let n = c.points.first().map_or(0, Point::dim);

    while active.len() > n + 1 {
        let pts: Vec<&Point> = active.iter().map(|&k| &c.points[k]).collect();
        let mut mu = affine_dependence(&pts);
        let orient = match values {
            Some(v) => active.iter().zip(&mu).map(|(&k, m)| m * v[k]).sum::<f64>(),
            None => 0.0,
        };
        let flip = if orient.abs() > 1e-14 {
            orient < 0.0
        } else {
            mu.iter()
                .find(|m| m.abs() > 1e-14)
                .is_some_and(|m| *m < 0.0)
        };
        if flip {
            mu.iter_mut().for_each(|m| *m = -*m);
        }

        let mut hit: Option<(usize, f64)> = None;
        for (pos, (&k, &m)) in active.iter().zip(&mu).enumerate() {
            if m > 1e-14 {
                let ratio = w[k] / m;
                if hit.is_none_or(|(_, best)| ratio < best) {
                    hit = Some((pos, ratio));
                }
            }
        }
        let (drop_pos, theta) = hit.expect("affine dependence has a positive entry");
        for (pos, (&k, &m)) in active.iter().zip(&mu).enumerate() {
            w[k] = if pos == drop_pos {
                0.0
            } else {
                (w[k] - theta * m).max(0.0)
            };
        }
        active.retain(|&k| w[k] > 0.0);
    }

    let combination = WeightedCombination {
        points: active.iter().map(|&k| c.points[k].clone()).collect(),
        weights: active.iter().map(|&k| w[k]).collect(),
    };
    Ok(Reduction {
        combination,
        source: active,
    })
}

/// Nonzero `mu` with `sum mu_k x_k = 0` and `sum mu_k = 0`. Needs more than
/// `n + 1` points so that a free column exists.
fn affine_dependence(pts: &[&Point]) -> Vec<f64> {
    let k = pts.len();
    let n = pts[0].dim();
    let rows = n + 1;
    let mut a: Vec<Vec<f64>> = (0..rows)
        .map(|r| pts.iter().map(|p| if r < n { p[r] } else { 1.0 }).collect())
        .collect();

    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let eps = 1e-12 * scale;
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..k {
        if r == rows {
            break;
        }
        let (best, mag) = (r..rows)
            .map(|i| (i, a[i][col].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag <= eps {
            continue;
        }
        a.swap(r, best);
        let p = a[r][col];
        for v in a[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[col] != 0.0 {
                let f = row[col];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    let free = (0..k)
        .find(|c| !pivot_cols.contains(c))
        .expect("more columns than rows");
    let mut mu = vec![0.0; k];
    mu[free] = 1.0;
    for (row, &pc) in pivot_cols.iter().enumerate() {
        mu[pc] = -a[row][free];
    }
    mu
}
