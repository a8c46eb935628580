use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ExtReal, Objective, Point};
use crate::oracles::unit_directions;

pub const DEFAULT_GRID_DIRECTIONS: usize = 720;
pub const DEFAULT_BUDGET: usize = 2000;
const COMPASS_INITIAL_STEP: f64 = 0.5;
const COMPASS_MIN_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage1Solver {
    /// Exhaustive sweep over a fixed direction grid; `n <= 3`.
    AngularGrid {
        directions: usize,
    },
    ProjectedSubgradient,
    CompassSearch,
}

impl fmt::Display for Stage1Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage1Solver::AngularGrid { .. } => "angular-grid",
            Stage1Solver::ProjectedSubgradient => "projected-subgradient",
            Stage1Solver::CompassSearch => "compass-search",
        })
    }
}

impl FromStr for Stage1Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "angular-grid" | "grid" => Ok(Stage1Solver::AngularGrid {
                directions: DEFAULT_GRID_DIRECTIONS,
            }),
            "projected-subgradient" | "subgradient" => Ok(Stage1Solver::ProjectedSubgradient),
            "compass-search" | "compass" => Ok(Stage1Solver::CompassSearch),
            other => Err(Error::InvalidInput(format!(
                "unknown stage-1 solver `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stage1Config {
    pub x0: Point,
    pub delta: f64,
    pub solver: Stage1Solver,
    pub budget: usize,
    pub seed: u64,
}

impl Stage1Config {
    pub fn new(x0: Point, delta: f64) -> Result<Self> {
        let cfg = Stage1Config {
            x0,
            delta,
            solver: Stage1Solver::CompassSearch,
            budget: DEFAULT_BUDGET,
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_solver(mut self, solver: Stage1Solver) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if self.budget == 0 {
            return Err(Error::InvalidInput("budget must be at least 1".into()));
        }
        if let Stage1Solver::AngularGrid { directions } = self.solver {
            if self.x0.dim() > 3 {
                return Err(Error::InvalidInput("angular grid supports n <= 3".into()));
            }
            if directions == 0 {
                return Err(Error::InvalidInput("angular grid needs directions".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stage1Outcome {
    /// Norm exactly `delta` (up to rounding).
    pub direction: Point,
    pub value: ExtReal,
    pub evaluations: usize,
    /// No probe improved on `f(x0)`.
    pub zero_progress: bool,
}

struct Probe<'a> {
    obj: &'a Objective,
    x0: &'a Point,
    delta: f64,
    evaluations: usize,
}

impl Probe<'_> {
    /// `f(x0 + delta * u)` for a unit `u`.
    fn at(&mut self, u: &Point) -> Result<ExtReal> {
        self.evaluations += 1;
        self.obj.evaluate(&self.x0.offset(self.delta, u))
    }

    fn raw(&mut self, x: &Point) -> Result<ExtReal> {
        self.evaluations += 1;
        self.obj.evaluate(x)
    }

    /// Best of the signed axis directions, lowest index on ties.
    fn best_axis(&mut self) -> Result<(Point, ExtReal)> {
        let n = self.x0.dim();
        let mut best: Option<(Point, ExtReal)> = None;
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let u = Point::axis(n, i, sign);
                let v = self.at(&u)?;
                if best.as_ref().is_none_or(|(_, b)| v < *b) {
                    best = Some((u, v));
                }
            }
        }
        Ok(best.expect("n >= 1"))
    }
}

/// Approximately minimizes `f(x0 + d)` over `|d| = delta`.
pub fn stage1_direction(obj: &Objective, cfg: &Stage1Config) -> Result<Stage1Outcome> {
    cfg.validate()?;
    cfg.x0.check_dim(obj.dimension())?;
    if !obj.domain().contains_ball(&cfg.x0, cfg.delta) {
        return Err(Error::InvalidBall { radius: cfg.delta });
    }
    let f0 = obj.evaluate(&cfg.x0)?;
    let mut probe = Probe {
        obj,
        x0: &cfg.x0,
        delta: cfg.delta,
        evaluations: 1,
    };
    let (u, value) = match cfg.solver {
        Stage1Solver::AngularGrid { directions } => angular_grid(&mut probe, directions)?,
        Stage1Solver::CompassSearch => compass_search(&mut probe, cfg.budget)?,
        Stage1Solver::ProjectedSubgradient => projected_subgradient(&mut probe, cfg)?,
    };
    Ok(Stage1Outcome {
        direction: u.scale(cfg.delta),
        value,
        evaluations: probe.evaluations,
        zero_progress: value >= f0,
    })
}

fn angular_grid(probe: &mut Probe, directions: usize) -> Result<(Point, ExtReal)> {
    let mut best: Option<(Point, ExtReal)> = None;
    for u in unit_directions(probe.x0.dim(), directions) {
        let v = probe.at(&u)?;
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((u, v));
        }
    }
    Ok(best.expect("non-empty grid"))
}

/// Compass search on the sphere: poll `normalize(u +- s e_i)`, move to the best
/// improving poll, halve `s` when none improves.
fn compass_search(probe: &mut Probe, budget: usize) -> Result<(Point, ExtReal)> {
    let n = probe.x0.dim();
    let (mut u, mut fu) = probe.best_axis()?;
    if n == 1 {
        return Ok((u, fu));
    }
    let mut step = COMPASS_INITIAL_STEP;
    while step >= COMPASS_MIN_STEP && probe.evaluations < budget {
        let mut moved: Option<(Point, ExtReal)> = None;
        'poll: for i in 0..n {
            for sign in [1.0, -1.0] {
                if probe.evaluations >= budget {
                    break 'poll;
                }
                let Some(cand) = u.offset(sign * step, &Point::axis(n, i, 1.0)).normalized() else {
                    continue;
                };
                let v = probe.at(&cand)?;
                let beats = moved.as_ref().map_or(v < fu, |(_, b)| v < *b);
                if beats {
                    moved = Some((cand, v));
                }
            }
        }
        match moved {
            Some((cand, v)) => {
                u = cand;
                fu = v;
            }
            None => step *= 0.5,
        }
    }
    Ok((u, fu))
}

/// Projected subgradient on the closed ball with steps `delta / (K sqrt k)`,
/// keeping the best iterate. The final answer is that iterate pushed radially
/// to the sphere, or the best axis probe when the boundary point is worse.
fn projected_subgradient(probe: &mut Probe, cfg: &Stage1Config) -> Result<(Point, ExtReal)> {
    let n = probe.x0.dim();
    let k_lip = probe.obj.lipschitz_k();
    let delta = cfg.delta;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut d = Point::zeros(n);
    let mut best_d: Option<Point> = None;
    let mut best_v = probe.raw(probe.x0)?;
    let per_step = if probe.obj.subgradient(probe.x0).is_some() {
        1
    } else {
        2 * n + 2
    };
    // Leave room for the closing axis and boundary probes.
    let limit = cfg.budget.saturating_sub(2 * n + 1);
    let mut k = 1usize;
    while probe.evaluations + per_step <= limit {
        let x = probe.x0 + &d;
        let g = subgradient_at(probe, &x, delta)?;
        let g = match g.normalized() {
            Some(_) => g,
            None if k == 1 => {
                // Stationary at the centre; restart from a seeded point.
                let r: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let u = Point::new(r)?
                    .normalized()
                    .unwrap_or_else(|| Point::axis(n, 0, 1.0));
                d = u.scale(0.5 * delta);
                k += 1;
                continue;
            }
            None => break,
        };
        let t = delta / (k_lip * (k as f64).sqrt());
        let mut next = d.offset(-t, &g);
        let norm = next.norm();
        if norm > delta {
            next = next.scale(delta / norm);
        }
        d = next;
        let v = probe.raw(&(probe.x0 + &d))?;
        if v < best_v {
            best_v = v;
            best_d = Some(d.clone());
        }
        k += 1;
    }

    let (axis_u, axis_v) = probe.best_axis()?;
    if let Some(u) = best_d.as_ref().and_then(Point::normalized) {
        let v = probe.at(&u)?;
        if v <= axis_v {
            return Ok((u, v));
        }
    }
    Ok((axis_u, axis_v))
}

/// Hinted subgradient, else central differences (one-sided near the boundary).
fn subgradient_at(probe: &mut Probe, x: &Point, delta: f64) -> Result<Point> {
    if let Some(g) = probe.obj.subgradient(x) {
        return Ok(g);
    }
    let n = x.dim();
    let h = 1e-7 * delta.max(1e-3);
    let fx = probe.raw(x)?;
    let mut g = vec![0.0; n];
    for (i, gi) in g.iter_mut().enumerate() {
        let e = Point::axis(n, i, 1.0);
        let fp = probe.raw(&x.offset(h, &e))?;
        let fm = probe.raw(&x.offset(-h, &e))?;
        *gi = match (fp.value(), fm.value(), fx.value()) {
            (Some(p), Some(m), _) => (p - m) / (2.0 * h),
            (Some(p), None, Some(c)) => (p - c) / h,
            (None, Some(m), Some(c)) => (c - m) / h,
            _ => 0.0,
        };
    }
    Point::new(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Domain;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn norm_2d() -> Objective {
        Objective::new(
            "norm",
            Domain::cube(&p(&[0.0, 0.0]), 3.0).unwrap(),
            1.0,
            |x| x.norm(),
        )
        .unwrap()
    }

    fn sq_2d() -> Objective {
        Objective::new(
            "sq",
            Domain::cube(&p(&[0.0, 0.0]), 3.0).unwrap(),
            8.5,
            |x| x.dot(x),
        )
        .unwrap()
    }

    fn aniso() -> Objective {
        Objective::new(
            "aniso",
            Domain::cube(&p(&[0.0, 0.0]), 3.0).unwrap(),
            61.0,
            |x| x[0] * x[0] + 10.0 * x[1] * x[1],
        )
        .unwrap()
    }

    #[test]
    fn grid_finds_the_radial_direction() {
        let cfg = Stage1Config::new(p(&[1.0, 0.0]), 0.5)
            .unwrap()
            .with_solver(Stage1Solver::AngularGrid { directions: 720 });
        let out = stage1_direction(&norm_2d(), &cfg).unwrap();
        assert!((out.direction[0] + 0.5).abs() < 1e-12);
        assert!(out.direction[1].abs() < 1e-12);
        assert!((out.direction.norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn all_solvers_point_at_the_minimizer_of_a_round_bowl() {
        let want = p(&[-0.5 / 2f64.sqrt(), -0.5 / 2f64.sqrt()]);
        for solver in [
            Stage1Solver::AngularGrid { directions: 720 },
            Stage1Solver::CompassSearch,
            Stage1Solver::ProjectedSubgradient,
        ] {
            let cfg = Stage1Config::new(p(&[1.0, 1.0]), 0.5)
                .unwrap()
                .with_solver(solver);
            let out = stage1_direction(&sq_2d(), &cfg).unwrap();
            assert!(
                out.direction.dist(&want) < 2e-3,
                "{solver}: {:?}",
                out.direction
            );
            assert!((out.direction.norm() - 0.5).abs() < 1e-9);
            assert!(!out.zero_progress);
        }
    }

    #[test]
    fn anisotropic_bowl_beats_the_minimizer_direction() {
        let cfg = Stage1Config::new(p(&[1.0, 1.0]), 0.1).unwrap();
        let out = stage1_direction(&aniso(), &cfg).unwrap();
        assert!(out.value.value().unwrap() <= 9.0892);
        let toward = aniso()
            .evaluate(&p(&[1.0 - 0.1 / 2f64.sqrt(), 1.0 - 0.1 / 2f64.sqrt()]))
            .unwrap();
        assert!((toward.value().unwrap() - 9.49936).abs() < 1e-5);
    }

    #[test]
    fn ball_must_fit_in_the_domain() {
        let cfg = Stage1Config::new(p(&[2.5, 0.0]), 1.0).unwrap();
        assert_eq!(
            stage1_direction(&norm_2d(), &cfg),
            Err(Error::InvalidBall { radius: 1.0 })
        );
    }

    #[test]
    fn zero_progress_at_the_minimizer() {
        let cfg = Stage1Config::new(p(&[0.0, 0.0]), 0.5).unwrap();
        let out = stage1_direction(&norm_2d(), &cfg).unwrap();
        assert!(out.zero_progress);
        assert!((out.direction.norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn budget_is_respected_by_iterative_solvers() {
        for solver in [
            Stage1Solver::CompassSearch,
            Stage1Solver::ProjectedSubgradient,
        ] {
            let cfg = Stage1Config::new(p(&[1.0, 1.0]), 0.5)
                .unwrap()
                .with_solver(solver)
                .with_budget(40);
            let out = stage1_direction(&aniso(), &cfg).unwrap();
            assert!(out.evaluations <= 40, "{solver}: {}", out.evaluations);
        }
    }

    #[test]
    fn solver_names_round_trip() {
        for s in ["angular-grid", "projected-subgradient", "compass-search"] {
            assert_eq!(s.parse::<Stage1Solver>().unwrap().to_string(), s);
        }
        assert!("newton".parse::<Stage1Solver>().is_err());
    }
}
