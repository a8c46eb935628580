//! Geometric and LP kernels: 1-D lower hull, dense simplex, Caratheodory
//! reduction.

mod caratheodory;
mod hull;
mod simplex;

pub use caratheodory::{caratheodory_reduce, Reduction, WeightedCombination, WEIGHT_SUM_TOL};
pub use hull::{lower_hull_1d, HullVertex, LowerHull, SLOPE_TOL};
pub use simplex::{solve_lp, LpProblem, LpSolution, LpStatus, FEASIBILITY_TOL, PIVOT_TOL};

use crate::error::Result;
use crate::model::Point;

/// LP over convex weights: minimize `sum_k lambda_k cost_k` subject to
/// `sum_k lambda_k x_k = query`, `sum_k lambda_k = 1`, `lambda >= 0`.
pub fn barycentric_lp(points: &[Point], costs: &[f64], query: &Point) -> Result<LpSolution> {
    let n = query.dim();
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|i| points.iter().map(|p| p[i]).collect())
        .collect();
    rows.push(vec![1.0; points.len()]);
    let mut rhs = query.coords().to_vec();
    rhs.push(1.0);
    solve_lp(&LpProblem::new(costs.to_vec(), rows, rhs)?)
}

/// Whether `x` lies in the convex hull of `points`, via phase-one feasibility.
/// The LP tolerance applies; `tol` adds slack through a bounding-box pre-check.
pub fn hull_contains(points: &[Point], x: &Point, tol: f64) -> bool {
    if points.is_empty() || points[0].dim() != x.dim() {
        return false;
    }
    for i in 0..x.dim() {
        let lo = points.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
        let hi = points
            .iter()
            .map(|p| p[i])
            .fold(f64::NEG_INFINITY, f64::max);
        if x[i] < lo - tol || x[i] > hi + tol {
            return false;
        }
    }
    let zeros = vec![0.0; points.len()];
    matches!(
        barycentric_lp(points, &zeros, x),
        Ok(LpSolution {
            status: LpStatus::Optimal,
            ..
        })
    )
}
