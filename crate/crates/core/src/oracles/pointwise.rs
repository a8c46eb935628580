//! Checks that evaluate an objective directly: the optimal ball direction and
//! strict decrease along the segment to the minimizer.

use crate::error::{Error, Result};
use crate::model::{Objective, Point};
use crate::oracles::{unit_directions, CheckReport, ViolationWitness};

pub const DIRECTION_TOL: f64 = 1e-9;
/// Equality band for the strictness part of the direction check.
pub const TIE_BAND: f64 = 1e-9;
/// Directions closer than this fraction of `delta` to the optimal one are not
/// counted as distinct ties.
pub const TIE_SEPARATION: f64 = 1e-3;
pub const MONOTONE_SLACK: f64 = 1e-12;
pub const DEFAULT_SEGMENT_GRID: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectionSweep {
    /// Points on the unit sphere (ignored for `n = 1`).
    pub directions: usize,
    /// Radii `delta * l / levels` for `l = 1..=levels`.
    pub levels: usize,
}

impl DirectionSweep {
    pub fn for_dim(n: usize) -> Self {
        DirectionSweep {
            directions: if n >= 3 { 2000 } else { 720 },
            levels: 10,
        }
    }
}

fn minimizer(obj: &Objective) -> Result<(Point, f64)> {
    match (obj.known_minimizer(), obj.known_min_value()) {
        (Some(x), Some(v)) => Ok((x.clone(), v)),
        _ => Err(Error::CheckUnavailable(format!(
            "{} has no known minimizer",
            obj.id()
        ))),
    }
}

/// Claim: `f(x0 + d) >= f(x0 + delta d0)` for all `|d| <= delta`, strictly
/// for `d != delta d0`, where `d0` points from `x0` to the minimizer.
pub fn check_optimal_direction(
    obj: &Objective,
    x0: &Point,
    delta: f64,
    sweep: DirectionSweep,
) -> Result<CheckReport> {
    x0.check_dim(obj.dimension())?;
    let (x_star, _) = minimizer(obj)?;
    let r = x0.dist(&x_star);
    if !(delta > 0.0) || delta > r + 1e-12 {
        return Err(Error::InvalidInput(format!(
            "need 0 < delta <= |x* - x0| = {r}, got {delta}"
        )));
    }
    let d0 = (&x_star - x0).normalized().expect("r > 0");
    let best_d = d0.scale(delta);
    let anchor = x0 + &best_d;
    let reference = obj.evaluate(&anchor)?.to_f64();

    let property = "optimal_direction";
    let mut report = CheckReport::new(property, obj.id())
        .tolerance("violation", DIRECTION_TOL)
        .tolerance("tie_band", TIE_BAND)
        .tolerance("tie_separation", TIE_SEPARATION);
    report.diagnostic("reference_value", Some(anchor.clone()), reference);

    for u in unit_directions(obj.dimension(), sweep.directions) {
        for l in 1..=sweep.levels.max(1) {
            let d = u.scale(delta * l as f64 / sweep.levels.max(1) as f64);
            let x = x0 + &d;
            let v = obj.evaluate(&x)?.to_f64();
            report.instances += 1;
            let w = || {
                ViolationWitness::new(
                    property,
                    obj.id(),
                    vec![x.clone(), anchor.clone()],
                    v,
                    reference,
                    0.0,
                )
                .at(x0, Some(delta))
            };
            if v < reference - DIRECTION_TOL {
                report.push(w());
            } else if (v - reference).abs() <= TIE_BAND && d.dist(&best_d) > TIE_SEPARATION * delta
            {
                let mut t = w().strictness();
                t.offset = TIE_BAND;
                t.margin = reference - v + TIE_BAND;
                report.push(t);
            }
        }
    }
    Ok(report.finish())
}

/// Claim: `f(z_b) < f(z_a)` for `0 <= a < b <= 1`, `z_a = x0 + a (x* - x0)`,
/// on the grid `a_i = i / (grid - 1)`. A pair fails unless the decrease
/// exceeds [`MONOTONE_SLACK`].
pub fn check_monotone_segment(obj: &Objective, x0: &Point, grid: usize) -> Result<CheckReport> {
    x0.check_dim(obj.dimension())?;
    let (x_star, _) = minimizer(obj)?;
    if x0.dist(&x_star) == 0.0 {
        return Err(Error::InvalidInput(
            "x0 coincides with the minimizer".into(),
        ));
    }
    if grid < 2 {
        return Err(Error::InvalidInput(
            "segment grid needs at least two points".into(),
        ));
    }
    let dir = &x_star - x0;
    let zs: Vec<Point> = (0..grid)
        .map(|i| {
            if i == grid - 1 {
                x_star.clone()
            } else {
                x0.offset(i as f64 / (grid - 1) as f64, &dir)
            }
        })
        .collect();
    let fs = zs
        .iter()
        .map(|z| obj.evaluate(z).map(|v| v.to_f64()))
        .collect::<Result<Vec<f64>>>()?;

    let property = "monotone_segment";
    let mut report = CheckReport::new(property, obj.id()).tolerance("slack", MONOTONE_SLACK);
    for a in 0..grid {
        for b in (a + 1)..grid {
            report.instances += 1;
            if fs[b] > fs[a] - MONOTONE_SLACK {
                report.push(
                    ViolationWitness::new(
                        property,
                        obj.id(),
                        vec![zs[a].clone(), zs[b].clone()],
                        fs[a],
                        fs[b],
                        MONOTONE_SLACK,
                    )
                    .at(x0, None),
                );
            }
        }
    }
    Ok(report.finish())
}
