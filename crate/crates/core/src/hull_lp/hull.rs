use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ExtReal, SampleCloud, DUPLICATE_TOL};

/// Slopes of consecutive hull edges must increase by more than this.
pub const SLOPE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HullVertex {
    pub x: f64,
    pub f: f64,
}

/// Lower convex hull of a 1-D cloud as a piecewise-linear function.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerHull {
    vertices: Vec<HullVertex>,
}

impl LowerHull {
    pub fn vertices(&self) -> &[HullVertex] {
        &self.vertices
    }

    /// Linear interpolation between hull vertices, `+inf` outside their span.
    pub fn eval(&self, x: f64) -> ExtReal {
        let v = &self.vertices;
        let (first, last) = (v[0], v[v.len() - 1]);
        if x < first.x - DUPLICATE_TOL || x > last.x + DUPLICATE_TOL {
            return ExtReal::INFINITY;
        }
        if v.len() == 1 {
            return ExtReal::finite(first.f);
        }
        // First edge whose right end is at or past x.
        let k = v.partition_point(|p| p.x < x).clamp(1, v.len() - 1);
        let (a, b) = (v[k - 1], v[k]);
        let t = (x - a.x) / (b.x - a.x);
        ExtReal::finite(a.f + t * (b.f - a.f))
    }
}

/// Lower convex hull of `(x_k, f_k)` by Andrew's monotone chain.
///
/// Samples sharing an abscissa keep the lower value. Collinear interior points
/// are dropped, so consecutive slopes strictly increase.
pub fn lower_hull_1d(cloud: &SampleCloud) -> Result<LowerHull> {
    if cloud.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: cloud.dim(),
        });
    }
    let mut pts: Vec<HullVertex> = cloud
        .points()
        .iter()
        .zip(cloud.values())
        .map(|(p, &f)| HullVertex { x: p[0], f })
        .collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.f.total_cmp(&b.f)));
    pts.dedup_by(|later, earlier| {
        let same = later.x - earlier.x < DUPLICATE_TOL;
        if same && later.f < earlier.f {
            *earlier = *later;
        }
        same
    });

    let mut hull: Vec<HullVertex> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let s_prev = (a.f - o.f) / (a.x - o.x);
            let s_next = (p.f - a.f) / (p.x - a.x);
            if s_next <= s_prev + SLOPE_TOL {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(LowerHull { vertices: hull })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Point;

    fn cloud(xs: &[f64], fs: &[f64]) -> SampleCloud {
        SampleCloud::merged(xs.iter().map(|&x| Point::scalar(x)).collect(), fs.to_vec()).unwrap()
    }

    fn xs_of(h: &LowerHull) -> Vec<f64> {
        h.vertices().iter().map(|v| v.x).collect()
    }

    #[test]
    fn convex_samples_are_all_vertices() {
        let xs = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let fs: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let h = lower_hull_1d(&cloud(&xs, &fs)).unwrap();
        assert_eq!(xs_of(&h), xs.to_vec());
    }

    #[test]
    fn w_function_drops_the_middle_bump() {
        let h = lower_hull_1d(&cloud(
            &[-1.0, -0.5, 0.0, 0.5, 1.0],
            &[0.8, 0.2, 0.5, 0.0, 0.9],
        ))
        .unwrap();
        assert_eq!(xs_of(&h), vec![-1.0, -0.5, 0.5, 1.0]);
        assert!((h.eval(0.0).value().unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn truncated_counterexample_hull_has_three_vertices() {
        let xs: Vec<f64> = (0..=100).map(|i| -5.0 + 10.0 * i as f64 / 100.0).collect();
        let fs: Vec<f64> = xs.iter().map(|x| x.abs().min(1.0)).collect();
        let h = lower_hull_1d(&cloud(&xs, &fs)).unwrap();
        assert_eq!(xs_of(&h), vec![-5.0, 0.0, 5.0]);
        assert!((h.eval(0.5).value().unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn equal_abscissae_keep_the_lower_value() {
        // Merged at the cloud level; also robust when the hull sees near-ties.
        let h = lower_hull_1d(&cloud(
            &[0.0, 1.0, 1.0 + 1e-13, 2.0],
            &[0.0, 3.0, -1.0, 0.0],
        ))
        .unwrap();
        assert_eq!(h.vertices()[1], HullVertex { x: 1.0, f: -1.0 });
    }

    #[test]
    fn outside_the_span_is_infinite() {
        let h = lower_hull_1d(&cloud(&[0.0, 1.0], &[0.0, 1.0])).unwrap();
        assert!(h.eval(1.5).is_infinite());
        assert!(h.eval(-0.1).is_infinite());
        let single = lower_hull_1d(&cloud(&[2.0], &[7.0])).unwrap();
        assert_eq!(single.eval(2.0).value(), Some(7.0));
    }

    #[test]
    fn rejects_multivariate_clouds() {
        let c = SampleCloud::new(vec![Point::new(vec![0.0, 0.0]).unwrap()], vec![0.0]).unwrap();
        assert!(lower_hull_1d(&c).is_err());
    }
}
