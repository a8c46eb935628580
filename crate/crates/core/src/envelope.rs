//! Lower convex envelope of a sample cloud, its points of convexity, the
//! convexity radius around a start point, and subgradient certificates.
//!
//! The envelope at `x` is the smallest `sum_k lambda_k f_k` over convex weights
//! with barycenter `x`. Both it and the subgradient test are small LPs; they are
//! dual to each other, so the subgradient gap at a sample equals its envelope gap.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull_lp::{
    barycentric_lp, caratheodory_reduce, solve_lp, LpProblem, LpStatus, WeightedCombination,
};
use crate::model::{ExtReal, Point, SampleCloud};

/// Relative tolerance for membership in the convexity set.
pub const DEFAULT_CONVEXITY_TOL: f64 = 1e-7;

/// Distance under which a query is taken to be a stored sample.
pub const POINT_MATCH_TOL: f64 = 1e-9;

/// Converts a relative tolerance into the absolute one used for `cloud`.
pub fn absolute_tolerance(cloud: &SampleCloud, rel: f64) -> f64 {
    rel * cloud.value_range().max(1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeCertificate {
    pub query: Point,
    pub value: ExtReal,
    /// At most `n + 1` points; empty when `value` is `+inf`.
    pub support: WeightedCombination,
    /// Cloud indices of the support points.
    pub support_indices: Vec<usize>,
}

/// Envelope value at `x` with its supporting combination.
pub fn lce_value(cloud: &SampleCloud, x: &Point) -> Result<EnvelopeCertificate> {
    x.check_dim(cloud.dim())?;
    let sol = barycentric_lp(cloud.points(), cloud.values(), x).map_err(|e| match e {
        Error::SolverStalled { iterations } => {
            Error::EnvelopeUnavailable(format!("simplex stalled after {iterations} pivots"))
        }
        other => other,
    })?;
    match sol.status {
        LpStatus::Infeasible => Ok(EnvelopeCertificate {
            query: x.clone(),
            value: ExtReal::INFINITY,
            support: WeightedCombination::empty(),
            support_indices: Vec::new(),
        }),
        LpStatus::Unbounded => Err(Error::EnvelopeUnavailable(
            "envelope LP reported unbounded".into(),
        )),
        LpStatus::Optimal => {
            let idx: Vec<usize> = (0..cloud.len()).filter(|&k| sol.x[k] > 1e-14).collect();
            let total: f64 = idx.iter().map(|&k| sol.x[k]).sum();
            let combo = WeightedCombination::new(
                idx.iter().map(|&k| cloud.point(k).clone()).collect(),
                idx.iter().map(|&k| sol.x[k] / total).collect(),
            )
            .map_err(|e| Error::EnvelopeUnavailable(e.to_string()))?;
            let vals: Vec<f64> = idx.iter().map(|&k| cloud.value(k)).collect();
            let red = caratheodory_reduce(&combo, Some(&vals))?;
            let support_indices: Vec<usize> = red.source.iter().map(|&s| idx[s]).collect();
            let kept: Vec<f64> = support_indices.iter().map(|&k| cloud.value(k)).collect();
            let value = red.combination.weighted_value(&kept);
            Ok(EnvelopeCertificate {
                query: x.clone(),
                value: ExtReal::new(value)?,
                support: red.combination,
                support_indices,
            })
        }
    }
}

/// Per-sample membership in the convexity set `{x : f(x) = envelope(x)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityMask {
    pub flags: Vec<bool>,
    /// `f(x_k) - envelope(x_k)`.
    pub gaps: Vec<f64>,
    pub envelope: Vec<f64>,
    /// Absolute tolerance that was applied.
    pub tolerance: f64,
}

impl ConvexityMask {
    pub fn count(&self) -> usize {
        self.flags.iter().filter(|f| **f).count()
    }
}

/// Flags every sample whose envelope gap is within `tol` (relative to the
/// cloud's value range, floored at 1).
pub fn convexity_set(cloud: &SampleCloud, tol: f64) -> Result<ConvexityMask> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("convexity tolerance {tol}")));
    }
    let abs_tol = absolute_tolerance(cloud, tol);
    let mut flags = Vec::with_capacity(cloud.len());
    let mut gaps = Vec::with_capacity(cloud.len());
    let mut envelope = Vec::with_capacity(cloud.len());
    for (p, &f) in cloud.points().iter().zip(cloud.values()) {
        let cert = lce_value(cloud, p)?;
        let env = cert.value.value().ok_or_else(|| {
            Error::EnvelopeUnavailable(format!("sample {p} fell outside its own hull"))
        })?;
        let gap = f - env;
        flags.push(gap <= abs_tol);
        gaps.push(gap);
        envelope.push(env);
    }
    Ok(ConvexityMask {
        flags,
        gaps,
        envelope,
        tolerance: abs_tol,
    })
}

/// Largest `delta` such that every sample within `delta` of `x0` is a point of
/// convexity, capped at the distance to the farthest sample.
pub fn convexity_radius(cloud: &SampleCloud, x0: &Point, tol: f64) -> Result<f64> {
    x0.check_dim(cloud.dim())?;
    let start = cloud
        .find(x0, POINT_MATCH_TOL)
        .ok_or_else(|| Error::InvalidStart(format!("{x0} is not a cloud point")))?;
    let mask = convexity_set(cloud, tol)?;
    if !mask.flags[start] {
        return Err(Error::InvalidStart(format!(
            "{x0} has envelope gap {} above tolerance {}",
            mask.gaps[start], mask.tolerance
        )));
    }
    let mut by_dist: Vec<(f64, usize)> = (0..cloud.len())
        .filter(|&k| k != start)
        .map(|k| (cloud.point(k).dist(x0), k))
        .collect();
    by_dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut radius = 0.0;
    let mut i = 0;
    while i < by_dist.len() {
        let d = by_dist[i].0;
        let mut j = i;
        while j < by_dist.len() && by_dist[j].0 - d <= 1e-12 {
            j += 1;
        }
        if by_dist[i..j].iter().any(|&(_, k)| !mask.flags[k]) {
            return Ok(radius);
        }
        radius = by_dist[j - 1].0;
        i = j;
    }
    Ok(radius)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubgradientCertificate {
    pub z: Point,
    pub feasible: bool,
    /// Subgradient over the cloud; present when feasible.
    pub g: Option<Point>,
    /// Minimized worst violation `max_i f(z) + g.(x_i - z) - f(x_i)`.
    pub gap: f64,
    pub tolerance: f64,
}

pub fn subgradient_certificate(cloud: &SampleCloud, z: &Point) -> Result<SubgradientCertificate> {
    subgradient_certificate_with_tol(cloud, z, DEFAULT_CONVEXITY_TOL)
}

/// Chebyshev LP for a subgradient at the sample `z`.
///
/// Variables are `g+`, `g-` (so `g` is free), the worst violation `t >= 0`
/// and one slack per sample.
pub fn subgradient_certificate_with_tol(
    cloud: &SampleCloud,
    z: &Point,
    tol: f64,
) -> Result<SubgradientCertificate> {
    z.check_dim(cloud.dim())?;
    let iz = cloud
        .find(z, POINT_MATCH_TOL)
        .ok_or_else(|| Error::InvalidInput(format!("{z} is not a cloud point")))?;
    let n = cloud.dim();
    let m = cloud.len();
    let fz = cloud.value(iz);
    let cols = 2 * n + 1 + m;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (p, &f)) in cloud.points().iter().zip(cloud.values()).enumerate() {
        let mut row = vec![0.0; cols];
        for j in 0..n {
            let d = p[j] - cloud.point(iz)[j];
            row[j] = d;
            row[n + j] = -d;
        }
        row[2 * n] = -1.0;
        row[2 * n + 1 + i] = 1.0;
        rows.push(row);
        rhs.push(f - fz);
    }
    let mut objective = vec![0.0; cols];
    objective[2 * n] = 1.0;

    let solve = |p: LpProblem| {
        let sol = solve_lp(&p).map_err(|e| match e {
            Error::SolverStalled { iterations } => {
                Error::CertificateUnavailable(format!("simplex stalled after {iterations} pivots"))
            }
            other => other,
        })?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::CertificateUnavailable(format!(
                "Chebyshev LP returned {:?}",
                sol.status
            )));
        }
        Ok(sol)
    };
    let sol = solve(LpProblem::new(objective, rows.clone(), rhs.clone())?)?;
    let abs_tol = absolute_tolerance(cloud, tol);
    let t = sol.value;
    let feasible = t <= abs_tol;

    // Among certificates with the same worst violation, report the one of
    // least l1 norm so the answer does not depend on the simplex path.
    let g = if feasible {
        let mut rows = rows;
        let mut rhs = rhs;
        for r in rows.iter_mut() {
            r.push(0.0);
        }
        let mut cap = vec![0.0; cols + 1];
        cap[2 * n] = 1.0;
        cap[cols] = 1.0;
        rows.push(cap);
        rhs.push(t.max(0.0));
        let mut l1 = vec![0.0; cols + 1];
        l1[..2 * n].iter_mut().for_each(|c| *c = 1.0);
        let canon = solve(LpProblem::new(l1, rows, rhs)?)?;
        Some(Point::new(
            (0..n).map(|j| canon.x[j] - canon.x[n + j]).collect(),
        )?)
    } else {
        None
    };
    Ok(SubgradientCertificate {
        z: cloud.point(iz).clone(),
        feasible,
        g,
        gap: t.max(0.0),
        tolerance: abs_tol,
    })
}
