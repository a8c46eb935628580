use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Point;

/// Slack on `lhs <= rhs`.
pub const BOUND_SLACK: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-9;

/// `f(x_m*) - f* <= K alpha + K r |d - d0|` with `m* = floor(r / alpha)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    #[serde(rename = "K")]
    pub k: f64,
    pub r: f64,
    pub dist: f64,
    pub m_star: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Index of the last march step that does not overshoot distance `r`. The
/// small epsilon keeps `0.8 / 0.1` from flooring to 7.
pub fn march_index(r: f64, alpha: f64) -> usize {
    (r / alpha + 1e-9).floor() as usize
}

pub fn error_bound(
    k: f64,
    r: f64,
    alpha: f64,
    d_unit: &Point,
    d0: &Point,
    lhs: f64,
) -> Result<BoundCheck> {
    for (name, v) in [("K", k), ("r", r), ("alpha", alpha)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::BoundUnavailable(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    d_unit.check_dim(d0.dim())?;
    for (name, u) in [("d", d_unit), ("d0", d0)] {
        if (u.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::BoundUnavailable(format!(
                "{name} is not a unit vector"
            )));
        }
    }
    let dist = d_unit.dist(d0);
    let rhs = k * alpha + k * r * dist;
    Ok(BoundCheck {
        k,
        r,
        dist,
        m_star: march_index(r, alpha),
        lhs,
        rhs,
        satisfied: lhs <= rhs + BOUND_SLACK,
    })
}
