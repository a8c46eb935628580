use crate::error::{Error, Result};
use crate::hull_lp;
use crate::model::Point;

/// Default absolute membership tolerance; matches the LP feasibility tolerance.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-9;

/// Shape of a compact domain.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    /// Axis-aligned box `[lower, upper]`.
    Box { lower: Point, upper: Point },
    /// Closed Euclidean ball.
    Ball { center: Point, radius: f64 },
    /// Convex hull of finitely many points (a sample cloud's support).
    Hull { vertices: Vec<Point> },
    /// One-dimensional interval with optionally open ends. Open ends are
    /// strict and ignore the membership tolerance.
    Interval {
        lo: f64,
        hi: f64,
        lo_open: bool,
        hi_open: bool,
    },
    /// Finite union; used for effective domains that are not convex.
    Union(Vec<Domain>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    tol: f64,
}

impl Domain {
    pub fn new(kind: DomainKind) -> Result<Self> {
        let d = Domain {
            kind,
            tol: DEFAULT_MEMBERSHIP_TOL,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::InvalidInput(format!("membership tolerance {tol}")));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn cube(center: &Point, half_width: f64) -> Result<Self> {
        let lower = Point::new(center.coords().iter().map(|c| c - half_width).collect())?;
        let upper = Point::new(center.coords().iter().map(|c| c + half_width).collect())?;
        Domain::new(DomainKind::Box { lower, upper })
    }

    pub fn closed_interval(lo: f64, hi: f64) -> Result<Self> {
        Domain::new(DomainKind::Interval {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        })
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            DomainKind::Box { lower, upper } => {
                lower.check_dim(upper.dim())?;
                if lower
                    .coords()
                    .iter()
                    .zip(upper.coords())
                    .any(|(l, u)| l > u)
                {
                    return Err(Error::InvalidInput("box with lower > upper".into()));
                }
            }
            DomainKind::Ball { radius, .. } => {
                if !(radius.is_finite() && *radius >= 0.0) {
                    return Err(Error::InvalidInput(format!("ball radius {radius}")));
                }
            }
            DomainKind::Hull { vertices } => {
                let first = vertices
                    .first()
                    .ok_or_else(|| Error::InvalidInput("empty hull".into()))?;
                for v in vertices {
                    v.check_dim(first.dim())?;
                }
            }
            DomainKind::Interval { lo, hi, .. } => {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::InvalidInput(format!("interval [{lo}, {hi}]")));
                }
            }
            DomainKind::Union(parts) => {
                let first = parts
                    .first()
                    .ok_or_else(|| Error::InvalidInput("empty union".into()))?;
                if parts.iter().any(|p| p.dim() != first.dim()) {
                    return Err(Error::InvalidInput("union of mixed dimensions".into()));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            DomainKind::Box { lower, .. } => lower.dim(),
            DomainKind::Ball { center, .. } => center.dim(),
            DomainKind::Hull { vertices } => vertices[0].dim(),
            DomainKind::Interval { .. } => 1,
            DomainKind::Union(parts) => parts[0].dim(),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        let tol = self.tol;
        match &self.kind {
            DomainKind::Box { lower, upper } => x
                .coords()
                .iter()
                .zip(lower.coords().iter().zip(upper.coords()))
                .all(|(c, (l, u))| *c >= l - tol && *c <= u + tol),
            DomainKind::Ball { center, radius } => x.dist(center) <= radius + tol,
            DomainKind::Hull { vertices } => {
                if x.dim() == 1 {
                    let (lo, hi) = min_max(vertices.iter().map(|v| v[0]));
                    x[0] >= lo - tol && x[0] <= hi + tol
                } else {
                    hull_lp::hull_contains(vertices, x, tol.max(hull_lp::FEASIBILITY_TOL))
                }
            }
            DomainKind::Interval {
                lo,
                hi,
                lo_open,
                hi_open,
            } => {
                let c = x[0];
                let above = if *lo_open { c > *lo } else { c >= lo - tol };
                let below = if *hi_open { c < *hi } else { c <= hi + tol };
                above && below
            }
            DomainKind::Union(parts) => parts.iter().any(|p| p.contains(x)),
        }
    }

    /// Whether the closed ball `B(center, radius)` lies in the domain.
    ///
    /// Exact for boxes, balls and intervals. For polytope hulls in `n >= 2`
    /// the sphere is probed at axis points and a deterministic angular sweep.
    pub fn contains_ball(&self, center: &Point, radius: f64) -> bool {
        if center.dim() != self.dim() || !(radius >= 0.0) {
            return false;
        }
        let tol = self.tol;
        match &self.kind {
            DomainKind::Box { lower, upper } => center
                .coords()
                .iter()
                .zip(lower.coords().iter().zip(upper.coords()))
                .all(|(c, (l, u))| c - radius >= l - tol && c + radius <= u + tol),
            DomainKind::Ball {
                center: bc,
                radius: br,
            } => center.dist(bc) + radius <= br + tol,
            DomainKind::Interval { .. } => {
                self.contains(&Point::scalar(center[0] - radius))
                    && self.contains(&Point::scalar(center[0] + radius))
            }
            DomainKind::Hull { .. } => {
                if center.dim() == 1 {
                    return self.contains(&Point::scalar(center[0] - radius))
                        && self.contains(&Point::scalar(center[0] + radius));
                }
                sphere_probes(center.dim(), 256)
                    .iter()
                    .all(|u| self.contains(&center.offset(radius, u)))
            }
            DomainKind::Union(parts) => parts.iter().any(|p| p.contains_ball(center, radius)),
        }
    }

    /// Axis-aligned bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        match &self.kind {
            DomainKind::Box { lower, upper } => (lower.clone(), upper.clone()),
            DomainKind::Ball { center, radius } => (
                Point::new(center.coords().iter().map(|c| c - radius).collect()).unwrap(),
                Point::new(center.coords().iter().map(|c| c + radius).collect()).unwrap(),
            ),
            DomainKind::Hull { vertices } => {
                let n = vertices[0].dim();
                let (lo, hi): (Vec<f64>, Vec<f64>) = (0..n)
                    .map(|i| min_max(vertices.iter().map(|v| v[i])))
                    .unzip();
                (Point::new(lo).unwrap(), Point::new(hi).unwrap())
            }
            DomainKind::Interval { lo, hi, .. } => (Point::scalar(*lo), Point::scalar(*hi)),
            DomainKind::Union(parts) => {
                let n = self.dim();
                let mut lo = vec![f64::INFINITY; n];
                let mut hi = vec![f64::NEG_INFINITY; n];
                for p in parts {
                    let (l, h) = p.bounding_box();
                    for i in 0..n {
                        lo[i] = lo[i].min(l[i]);
                        hi[i] = hi[i].max(h[i]);
                    }
                }
                (Point::new(lo).unwrap(), Point::new(hi).unwrap())
            }
        }
    }

    /// Radius of a ball around the bounding-box centre enclosing the domain.
    pub fn enclosing_radius(&self) -> f64 {
        self.diameter() / 2.0
    }

    /// Diagonal of the bounding box; an upper bound on the diameter.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        lo.dist(&hi)
    }
}

fn min_max(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Deterministic unit vectors: the `2n` axis directions followed by a uniform
/// angle grid (`n = 2`) or a Fibonacci sphere (`n >= 3`, first three coords).
pub(crate) fn sphere_probes(n: usize, count: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(2 * n + count);
    for i in 0..n {
        out.push(Point::axis(n, i, 1.0));
        out.push(Point::axis(n, i, -1.0));
    }
    if n == 2 {
        out.extend(crate::oracles::angle_grid(count));
    } else if n >= 3 {
        for u in crate::oracles::fibonacci_sphere(count) {
            let mut c = vec![0.0; n];
            c[..3].copy_from_slice(u.coords());
            out.push(Point::new(c).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn box_membership_respects_tolerance() {
        let d = Domain::cube(&p(&[0.0, 0.0]), 1.0).unwrap();
        assert!(d.contains(&p(&[1.0 + 5e-10, -1.0])));
        assert!(!d.contains(&p(&[1.0 + 1e-8, 0.0])));
        assert!(d.contains_ball(&p(&[0.5, 0.0]), 0.5));
        assert!(!d.contains_ball(&p(&[0.5, 0.0]), 0.6));
        assert!((d.diameter() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn open_interval_end_is_strict() {
        let d = Domain::new(DomainKind::Interval {
            lo: 0.5,
            hi: 1.0,
            lo_open: true,
            hi_open: false,
        })
        .unwrap();
        assert!(!d.contains(&Point::scalar(0.5)));
        assert!(d.contains(&Point::scalar(0.5 + 1e-12)));
        assert!(d.contains(&Point::scalar(1.0)));
        assert!(d.contains_ball(&Point::scalar(0.8), 0.1));
        assert!(!d.contains_ball(&Point::scalar(0.6), 0.1));
    }

    #[test]
    fn union_and_hull() {
        let u = Domain::new(DomainKind::Union(vec![
            Domain::closed_interval(0.0, 0.0).unwrap(),
            Domain::closed_interval(2.0, 3.0).unwrap(),
        ]))
        .unwrap();
        assert!(u.contains(&Point::scalar(0.0)));
        assert!(!u.contains(&Point::scalar(1.0)));
        assert_eq!(u.bounding_box().1[0], 3.0);

        let tri = Domain::new(DomainKind::Hull {
            vertices: vec![p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[0.0, 1.0])],
        })
        .unwrap();
        assert!(tri.contains(&p(&[0.25, 0.25])));
        assert!(!tri.contains(&p(&[0.6, 0.6])));
        assert!(tri.contains_ball(&p(&[0.25, 0.25]), 0.1));
        assert!(!tri.contains_ball(&p(&[0.25, 0.25]), 0.3));
    }

    #[test]
    fn ball_domain() {
        let b = Domain::new(DomainKind::Ball {
            center: p(&[0.0, 0.0]),
            radius: 2.0,
        })
        .unwrap();
        assert!(b.contains(&p(&[2.0, 0.0])));
        assert!(b.contains_ball(&p(&[1.0, 0.0]), 1.0));
        assert!(!b.contains_ball(&p(&[1.0, 0.0]), 1.1));
        assert_eq!(b.enclosing_radius(), 8f64.sqrt());
    }
}
