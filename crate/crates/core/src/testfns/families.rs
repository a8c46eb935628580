//! Seeded random families, reproducible from `(dimension, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{axis_grid, box_grid, tags, PiecewiseLinear, RegistryEntry, Tag};
use crate::error::{Error, Result};
use crate::model::{Domain, Objective, Point};

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Point {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = Point::new(v).expect("finite");
        let norm = p.norm();
        if norm > 1e-3 && norm <= 1.0 {
            return p.scale(1.0 / norm);
        }
    }
}

/// `phi(|x - c|)` with `phi` convex, nondecreasing, piecewise linear and with
/// positive initial slope. Samples cover the box `c +- 3`; the domain is twice
/// as wide so that any march of length `|x* - x0|` from the start stays inside.
pub fn radial_family(n: usize, seed: u64) -> Result<RegistryEntry> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = Point::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
    let kinks = rng.gen_range(1..=3);
    let mut breaks: Vec<f64> = (0..kinks).map(|_| rng.gen_range(0.05..3.0)).collect();
    breaks.sort_by(f64::total_cmp);
    let mut slopes = vec![rng.gen_range(0.2..1.0)];
    for _ in 0..kinks {
        let last = slopes[slopes.len() - 1];
        slopes.push(last + rng.gen_range(0.0..1.5));
    }
    let k = slopes[slopes.len() - 1];

    let phi_breaks = breaks.clone();
    let phi_slopes = slopes.clone();
    let phi = move |t: f64| {
        let mut v = phi_slopes[0] * t;
        for (j, b) in phi_breaks.iter().enumerate() {
            v += (phi_slopes[j + 1] - phi_slopes[j]) * (t - b).max(0.0);
        }
        v
    };

    let a = 3.0;
    let domain = Domain::cube(&c, 2.0 * a)?;
    let lower = c.offset(-a, &Point::new(vec![1.0; n])?);
    let upper = c.offset(a, &Point::new(vec![1.0; n])?);
    let cc = c.clone();
    let objective = Objective::new("radial_family", domain, k, move |x| phi(x.dist(&cc)))?
        .with_minimizer(c.clone(), 0.0)?
        .with_preconditions_verified(true);

    let r = rng.gen_range(0.5..2.5);
    let u = random_unit(&mut rng, n);
    let delta = rng.gen_range(0.1..0.5);
    Ok(RegistryEntry {
        id: "radial_family".into(),
        objective,
        tags: tags(&[Tag::Convex, Tag::Lsc, Tag::Radial, Tag::UniqueMin]),
        mesh: a / 2.0,
        sample_points: box_grid(&lower, &upper, a / 2.0),
        start: c.offset(r, &u),
        delta,
    })
}

/// Lower semicontinuous functions on a compact domain with a unique minimizer
/// at value 0, sampled on `[-1, 1]^n`. For `n = 1`, a random piecewise-linear
/// function on `[-1, 1]` with one vertex pinned to zero, held constant beyond
/// its ends; for `n >= 2`, `min_j (a_j + s_j |x - c_j|)` where only the first
/// cone reaches zero. Domains extend past the sampled box so that a march of
/// length `|x* - x0|` from the start never leaves them.
pub fn lsc_family(n: usize, seed: u64) -> Result<RegistryEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match n {
        0 => Err(Error::InvalidInput("dimension must be at least 1".into())),
        1 => {
            let knots = 5;
            let bottom = rng.gen_range(0..=knots);
            let vertices: Vec<(f64, f64)> = (0..=knots)
                .map(|k| {
                    let x = -1.0 + 2.0 * k as f64 / knots as f64;
                    let f = rng.gen_range(0.1..1.0);
                    (x, if k == bottom { 0.0 } else { f })
                })
                .collect();
            let x_star = vertices[bottom].0;
            let pl = PiecewiseLinear::new(vertices)?;
            let k = pl.lipschitz();
            let objective =
                Objective::new("lsc_family", Domain::closed_interval(-3.0, 3.0)?, k, {
                    let pl = pl.clone();
                    move |x| pl.eval(x[0].clamp(-1.0, 1.0))
                })?
                .with_minimizer(Point::scalar(x_star), 0.0)?
                .with_preconditions_verified(true);
            let mesh = 0.05;
            Ok(RegistryEntry {
                id: "lsc_family".into(),
                objective,
                tags: tags(&[Tag::Lsc, Tag::UniqueMin]),
                mesh,
                sample_points: axis_grid(-1.0, 1.0, mesh)
                    .into_iter()
                    .map(Point::scalar)
                    .collect(),
                start: Point::scalar(if x_star > 0.0 { -0.7 } else { 0.7 }),
                delta: 0.1,
            })
        }
        _ => {
            let mesh = 0.25;
            let grid = axis_grid(-1.0, 1.0, mesh);
            let c0 = Point::new(
                (0..n)
                    .map(|_| grid[rng.gen_range(1..grid.len() - 1)])
                    .collect(),
            )?;
            let mut cones = vec![(0.0, rng.gen_range(0.5..2.0), c0.clone())];
            for _ in 0..3 {
                let c = Point::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
                cones.push((rng.gen_range(0.2..1.0), rng.gen_range(0.5..2.0), c));
            }
            let k = cones.iter().map(|c| c.1).fold(0.0, f64::max);
            let domain = Domain::cube(&Point::zeros(n), 1.0 + 1.5 * (n as f64).sqrt())?;
            let (lower, upper) = (Point::new(vec![-1.0; n])?, Point::new(vec![1.0; n])?);
            let objective = Objective::new("lsc_family", domain, k, move |x| {
                cones
                    .iter()
                    .map(|(a, s, c)| a + s * x.dist(c))
                    .fold(f64::INFINITY, f64::min)
            })?
            .with_minimizer(c0.clone(), 0.0)?
            .with_preconditions_verified(true);
            let start = Point::new(
                c0.coords()
                    .iter()
                    .map(|v| if *v > 0.0 { -0.7 } else { 0.7 })
                    .collect(),
            )?;
            Ok(RegistryEntry {
                id: "lsc_family".into(),
                objective,
                tags: tags(&[Tag::Lsc, Tag::UniqueMin]),
                mesh,
                sample_points: box_grid(&lower, &upper, mesh),
                start,
                delta: 0.1,
            })
        }
    }
}
