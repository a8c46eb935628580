//! Checks on sample clouds: envelope against brute force, minimizer
//! preservation, restriction to the convexity set, subgradient duality, and
//! Caratheodory reduction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::envelope::{
    absolute_tolerance, convexity_set, lce_value, subgradient_certificate_with_tol,
};
use crate::error::{Error, Result};
use crate::hull_lp::{caratheodory_reduce, hull_contains, WeightedCombination};
use crate::model::{Point, SampleCloud};
use crate::oracles::{lce_exhaustive, CheckReport, ViolationWitness};

pub const ORACLE_TOL: f64 = 1e-8;
pub const RESTRICTION_TOL: f64 = 1e-7;
pub const UNIQUENESS_TOL: f64 = 1e-9;
pub const BARYCENTER_TOL: f64 = 1e-9;

fn mismatch(
    property: &str,
    id: &str,
    x: &Point,
    a: f64,
    b: f64,
    tol: f64,
) -> Option<ViolationWitness> {
    let diff = if a.is_infinite() && b.is_infinite() {
        0.0
    } else {
        (a - b).abs()
    };
    // Encoded so that margin = |a - b| - tol.
    (diff > tol).then(|| {
        let mut w = ViolationWitness::new(property, id, vec![x.clone()], a, b, 0.0);
        w.offset = tol;
        w.margin = diff - tol;
        w
    })
}

/// LP envelope against enumeration at `queries`, plus `envelope <= f` at every
/// sample.
pub fn check_envelope_oracle(
    cloud: &SampleCloud,
    id: &str,
    queries: &[Point],
) -> Result<CheckReport> {
    let property = "envelope";
    let mut report = CheckReport::new(property, id).tolerance("agreement", ORACLE_TOL);
    for x in queries.iter().chain(cloud.points()) {
        let lp = lce_value(cloud, x)?.value.to_f64();
        let brute = lce_exhaustive(cloud, x)?.to_f64();
        report.instances += 1;
        if let Some(w) = mismatch(property, id, x, lp, brute, ORACLE_TOL) {
            report.push(w);
        }
    }
    for (p, &f) in cloud.points().iter().zip(cloud.values()) {
        let env = lce_value(cloud, p)?.value.to_f64();
        report.instances += 1;
        if env > f + ORACLE_TOL {
            report.push(ViolationWitness::new(
                property,
                id,
                vec![p.clone()],
                f,
                env,
                -ORACLE_TOL,
            ));
        }
    }
    Ok(report.finish())
}

/// The sample argmin of `f` and of its envelope must coincide, with the
/// envelope's runner-up more than `tol` above the minimum. Envelope values at
/// `probes` are reported as flatness diagnostics.
pub fn check_minimizer_preservation(
    cloud: &SampleCloud,
    id: &str,
    probes: &[Point],
    tol: f64,
) -> Result<CheckReport> {
    let property = "minimizer_preservation";
    let mut report = CheckReport::new(property, id)
        .tolerance("uniqueness", tol)
        .tolerance("sample_minimum", 1e-12);
    report.instances = cloud.len();
    let mask = convexity_set(cloud, crate::envelope::DEFAULT_CONVEXITY_TOL)?;

    let order = |vals: &[f64]| {
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        idx
    };
    let by_f = order(cloud.values());
    let by_env = order(&mask.envelope);
    let (fi, ei) = (by_f[0], by_env[0]);
    report.diagnostic(
        "sample_argmin",
        Some(cloud.point(fi).clone()),
        cloud.value(fi),
    );
    report.diagnostic(
        "envelope_argmin",
        Some(cloud.point(ei).clone()),
        mask.envelope[ei],
    );

    if cloud.unique_argmin(1e-12).is_none() {
        let j = by_f[1];
        report.push(ViolationWitness::new(
            property,
            id,
            vec![cloud.point(j).clone(), cloud.point(fi).clone()],
            cloud.value(j),
            cloud.value(fi) + 1e-12,
            0.0,
        ));
    }
    if fi != ei {
        report.push(ViolationWitness::new(
            property,
            id,
            vec![cloud.point(fi).clone(), cloud.point(ei).clone()],
            mask.envelope[fi],
            mask.envelope[ei],
            f64::MIN_POSITIVE,
        ));
    }
    if cloud.len() > 1 {
        let runner_up = mask.envelope[by_env[1]];
        let gap = runner_up - mask.envelope[ei];
        report.diagnostic("envelope_margin", None, gap);
        if gap <= tol {
            report.push(ViolationWitness::new(
                property,
                id,
                vec![cloud.point(by_env[1]).clone(), cloud.point(ei).clone()],
                runner_up,
                mask.envelope[ei] + tol,
                0.0,
            ));
        }
    }
    for p in probes {
        let v = lce_value(cloud, p)?.value.to_f64();
        report.diagnostic("flatness", Some(p.clone()), v);
    }
    Ok(report.finish())
}

/// The envelope rebuilt from convexity-set samples alone must match the full
/// envelope at every sample, and equal `f` on the convexity set.
pub fn check_envelope_restriction(cloud: &SampleCloud, id: &str, tol: f64) -> Result<CheckReport> {
    let property = "envelope_restriction";
    let match_tol = absolute_tolerance(cloud, RESTRICTION_TOL);
    let mut report = CheckReport::new(property, id)
        .tolerance("convexity", tol)
        .tolerance("match", match_tol);
    let mask = convexity_set(cloud, tol)?;
    let sub = cloud.select(|k| mask.flags[k])?;
    report.diagnostic("convexity_points", None, mask.count() as f64);
    for (k, p) in cloud.points().iter().enumerate() {
        let restricted = lce_value(&sub, p)?.value.to_f64();
        report.instances += 1;
        if let Some(w) = mismatch(property, id, p, restricted, mask.envelope[k], match_tol) {
            report.push(w);
        }
        if mask.flags[k] {
            report.instances += 1;
            if let Some(w) = mismatch(property, id, p, restricted, cloud.value(k), match_tol) {
                report.push(w);
            }
        }
    }
    Ok(report.finish())
}

/// Whether `x` has a small axis-aligned cross inside the cloud's hull.
fn is_interior(cloud: &SampleCloud, x: &Point) -> bool {
    let (lo, hi) = (0..cloud.dim()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
        cloud
            .points()
            .iter()
            .fold((lo, hi), |(lo, hi), p| (lo.min(p[i]), hi.max(p[i])))
    });
    let eps = 1e-6 * (hi - lo).max(1e-12);
    (0..cloud.dim()).all(|i| {
        [eps, -eps].iter().all(|&s| {
            let q = x.offset(s, &Point::axis(cloud.dim(), i, 1.0));
            hull_contains(cloud.points(), &q, 0.0)
        })
    })
}

/// At interior samples a subgradient certificate exists exactly when the
/// sample is flagged as a point of convexity, with the same tolerance.
pub fn check_subgradient_equivalence(
    cloud: &SampleCloud,
    id: &str,
    tol: f64,
) -> Result<CheckReport> {
    let property = "subgradient_equivalence";
    let mut report = CheckReport::new(property, id).tolerance("convexity", tol);
    let mask = convexity_set(cloud, tol)?;
    for (k, z) in cloud.points().iter().enumerate() {
        if !is_interior(cloud, z) {
            continue;
        }
        report.instances += 1;
        let cert = subgradient_certificate_with_tol(cloud, z, tol)?;
        if cert.feasible != mask.flags[k] {
            let mut w =
                ViolationWitness::new(property, id, vec![z.clone()], cert.gap, mask.gaps[k], 0.0);
            w.margin = (cert.gap - mask.gaps[k]).abs().max(f64::MIN_POSITIVE);
            w.offset = w.margin - (w.rhs - w.lhs);
            report.push(w);
        }
    }
    Ok(report.finish())
}

/// Seeded random combinations in `R^n` reduced to at most `n + 1` points; the
/// barycenter must be kept and the weighted value must not increase.
pub fn check_caratheodory(n: usize, count: usize, seed: u64) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let property = "caratheodory";
    let id = format!("random_combinations_n{n}");
    let mut report = CheckReport::new(property, &id).tolerance("barycenter", BARYCENTER_TOL);
    report.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let k = rng.gen_range(n + 2..=n + 8);
        let points: Vec<Point> = (0..k)
            .map(|_| {
                Point::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("finite")
            })
            .collect();
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let values: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let combo = WeightedCombination::new(points, weights)?;
        let red = caratheodory_reduce(&combo, Some(&values))?;
        report.instances += 1;

        let before = combo.barycenter().expect("non-empty");
        let after = red.combination.barycenter().expect("non-empty");
        let drift = before.dist(&after);
        if drift > BARYCENTER_TOL {
            let mut w =
                ViolationWitness::new(property, &id, vec![before.clone(), after], 0.0, drift, 0.0);
            w.margin = drift - BARYCENTER_TOL;
            w.offset = -BARYCENTER_TOL;
            report.push(w);
        }
        if red.combination.len() > n + 1 {
            report.push(ViolationWitness::new(
                property,
                &id,
                vec![before.clone()],
                (n + 1) as f64,
                red.combination.len() as f64,
                0.0,
            ));
        }
        let kept: Vec<f64> = red.source.iter().map(|&s| values[s]).collect();
        let (v0, v1) = (
            combo.weighted_value(&values),
            red.combination.weighted_value(&kept),
        );
        if v1 > v0 + 1e-12 {
            report.push(ViolationWitness::new(
                property,
                &id,
                vec![before],
                v0,
                v1,
                -1e-12,
            ));
        }
    }
    Ok(report.finish())
}
