//! Envelope by exhaustive enumeration of small supports, independent of the
//! LP path. An optimal basic solution uses affinely independent points, so
//! singles and pairs (n = 1) or up to triples (n = 2) are enough.

use crate::envelope::absolute_tolerance;
use crate::error::{Error, Result};
use crate::model::{ExtReal, Point, SampleCloud};

pub const BRUTEFORCE_MAX_POINTS: usize = 40;
/// Limit for the all-samples convexity flag search.
pub const EXHAUSTIVE_MAX_POINTS: usize = 200;

/// Envelope value at `x` for clouds with `n <= 2` and at most
/// [`BRUTEFORCE_MAX_POINTS`] samples.
pub fn lce_bruteforce(cloud: &SampleCloud, x: &Point) -> Result<ExtReal> {
    if cloud.len() > BRUTEFORCE_MAX_POINTS {
        return Err(Error::InvalidInput(format!(
            "brute force takes at most {BRUTEFORCE_MAX_POINTS} points, got {}",
            cloud.len()
        )));
    }
    enumerate(cloud, x)
}

/// Same enumeration with the larger [`EXHAUSTIVE_MAX_POINTS`] limit.
pub fn lce_exhaustive(cloud: &SampleCloud, x: &Point) -> Result<ExtReal> {
    if cloud.len() > EXHAUSTIVE_MAX_POINTS {
        return Err(Error::InvalidInput(format!(
            "exhaustive search takes at most {EXHAUSTIVE_MAX_POINTS} points, got {}",
            cloud.len()
        )));
    }
    enumerate(cloud, x)
}

/// Convexity flags by running the enumeration at every sample.
pub fn exhaustive_convexity_flags(cloud: &SampleCloud, tol: f64) -> Result<Vec<bool>> {
    if cloud.len() > EXHAUSTIVE_MAX_POINTS {
        return Err(Error::InvalidInput(format!(
            "exhaustive search takes at most {EXHAUSTIVE_MAX_POINTS} points, got {}",
            cloud.len()
        )));
    }
    let abs_tol = absolute_tolerance(cloud, tol);
    cloud
        .points()
        .iter()
        .zip(cloud.values())
        .map(|(p, &f)| {
            let env = enumerate(cloud, p)?.to_f64();
            Ok(f - env <= abs_tol)
        })
        .collect()
}

fn enumerate(cloud: &SampleCloud, x: &Point) -> Result<ExtReal> {
    x.check_dim(cloud.dim())?;
    let pts = cloud.points();
    let f = cloud.values();
    let scale = pts
        .iter()
        .flat_map(|p| p.coords().iter())
        .chain(x.coords())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let eps = 1e-12 * scale;
    let mut best = f64::INFINITY;

    for (p, &v) in pts.iter().zip(f) {
        if p.dist(x) <= eps {
            best = best.min(v);
        }
    }
    match cloud.dim() {
        1 => {
            for i in 0..pts.len() {
                for j in (i + 1)..pts.len() {
                    let (a, b) = (pts[i][0], pts[j][0]);
                    if (b - a).abs() <= eps {
                        continue;
                    }
                    let t = (x[0] - a) / (b - a);
                    if (-1e-12..=1.0 + 1e-12).contains(&t) {
                        let t = t.clamp(0.0, 1.0);
                        best = best.min((1.0 - t) * f[i] + t * f[j]);
                    }
                }
            }
        }
        2 => {
            let cross = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
            let sub = |p: &Point, q: &Point| [p[0] - q[0], p[1] - q[1]];
            for i in 0..pts.len() {
                let w = sub(x, &pts[i]);
                for j in (i + 1)..pts.len() {
                    let e = sub(&pts[j], &pts[i]);
                    let len2 = e[0] * e[0] + e[1] * e[1];
                    if len2.sqrt() > eps && cross(e, w).abs() <= eps * len2.sqrt() {
                        let t = (e[0] * w[0] + e[1] * w[1]) / len2;
                        if (-1e-12..=1.0 + 1e-12).contains(&t) {
                            let t = t.clamp(0.0, 1.0);
                            best = best.min((1.0 - t) * f[i] + t * f[j]);
                        }
                    }
                    for k in (j + 1)..pts.len() {
                        let g = sub(&pts[k], &pts[i]);
                        let det = cross(e, g);
                        if det.abs() <= 1e-14 * scale * scale {
                            continue;
                        }
                        let lj = cross(w, g) / det;
                        let lk = cross(e, w) / det;
                        let li = 1.0 - lj - lk;
                        if li >= -1e-12 && lj >= -1e-12 && lk >= -1e-12 {
                            best = best.min(li * f[i] + lj * f[j] + lk * f[k]);
                        }
                    }
                }
            }
        }
        n => {
            return Err(Error::InvalidInput(format!(
                "brute force supports n <= 2, got {n}"
            )));
        }
    }
    ExtReal::new(best)
}
