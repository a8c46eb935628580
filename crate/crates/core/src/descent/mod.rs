//! Two-stage directional descent: pick a direction on a small sphere around
//! `x0`, then march along it with a fixed step.

mod bound;
mod stage1;

pub use bound::{error_bound, march_index, BoundCheck, BOUND_SLACK};
pub use stage1::{
    stage1_direction, Stage1Config, Stage1Outcome, Stage1Solver, DEFAULT_BUDGET,
    DEFAULT_GRID_DIRECTIONS,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ExtReal, Objective, Point};

pub const DEFAULT_WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct Stage2Config {
    pub alpha: f64,
    /// Defaults to `ceil(diameter / alpha)` of the objective's domain.
    pub max_steps: Option<usize>,
    /// Consecutive non-improvements before stopping.
    pub window: usize,
    /// Skip the march when the stage-1 point already reaches this value.
    pub target: Option<f64>,
}

impl Stage2Config {
    pub fn new(alpha: f64) -> Result<Self> {
        let cfg = Stage2Config {
            alpha,
            max_steps: None,
            window: DEFAULT_WINDOW,
            target: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_max_steps(mut self, steps: usize) -> Self {
        self.max_steps = Some(steps);
        self
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.max_steps == Some(0) {
            return Err(Error::InvalidInput("max_steps must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(Error::InvalidInput("window must be at least 1".into()));
        }
        Ok(())
    }

    fn steps_for(&self, obj: &Objective) -> usize {
        self.max_steps
            .unwrap_or_else(|| ((obj.domain().diameter() / self.alpha).ceil() as usize).max(1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub m: usize,
    pub x: Point,
    pub f: ExtReal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestPoint {
    pub x: Point,
    pub f: ExtReal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DescentReport {
    pub d_star: Point,
    pub skipped_stage2: bool,
    pub zero_progress: bool,
    pub trace: Vec<TracePoint>,
    pub best: BestPoint,
    pub evaluations: usize,
    pub bound: Option<BoundCheck>,
    pub preconditions_verified: bool,
}

/// Marches `x_m = x0 + m alpha u`, `u = d / |d|`, each iterate computed from
/// `m` directly. Iterates outside the domain evaluate to `+inf` and count as
/// non-improvements.
pub fn stage2_march(
    obj: &Objective,
    x0: &Point,
    d_star: &Point,
    cfg: &Stage2Config,
) -> Result<DescentReport> {
    cfg.validate()?;
    x0.check_dim(obj.dimension())?;
    d_star.check_dim(obj.dimension())?;
    let u = d_star
        .normalized()
        .ok_or_else(|| Error::InvalidInput("direction must be nonzero".into()))?;

    let mut trace = Vec::new();
    let mut best: Option<BestPoint> = None;
    let mut stale = 0;
    for m in 0..=cfg.steps_for(obj) {
        let x = x0.offset(m as f64 * cfg.alpha, &u);
        let f = obj.evaluate(&x)?;
        trace.push(TracePoint { m, x: x.clone(), f });
        if best.as_ref().is_none_or(|b| f < b.f) {
            best = Some(BestPoint { x, f });
            stale = 0;
        } else {
            stale += 1;
            if stale >= cfg.window {
                break;
            }
        }
    }
    let evaluations = trace.len();
    Ok(DescentReport {
        d_star: d_star.clone(),
        skipped_stage2: false,
        zero_progress: false,
        best: best.expect("m = 0 is always evaluated"),
        trace,
        evaluations,
        bound: bound_for(obj, x0, &u, cfg.alpha)?,
        preconditions_verified: obj.preconditions_verified(),
    })
}

/// Stage 1 then stage 2 along the found direction. The march is skipped when
/// the stage-1 point meets `target` or one more step past it does not improve.
pub fn directional_descent(
    obj: &Objective,
    s1: &Stage1Config,
    s2: &Stage2Config,
) -> Result<DescentReport> {
    s2.validate()?;
    let stage1 = stage1_direction(obj, s1)?;
    let u = stage1
        .direction
        .normalized()
        .expect("stage 1 returns a direction of norm delta");
    let p = s1.x0.offset(s1.delta, &u);
    let fp = stage1.value;

    let meets_target = s2
        .target
        .is_some_and(|t| fp.value().is_some_and(|v| v <= t));
    let (skip, probe_evals) = if meets_target {
        (true, 0)
    } else {
        (obj.evaluate(&p.offset(s2.alpha, &u))? >= fp, 1)
    };

    let mut report = if skip {
        DescentReport {
            d_star: stage1.direction.clone(),
            skipped_stage2: true,
            zero_progress: false,
            trace: Vec::new(),
            best: BestPoint { x: p, f: fp },
            evaluations: 0,
            bound: bound_for(obj, &s1.x0, &u, s2.alpha)?,
            preconditions_verified: obj.preconditions_verified(),
        }
    } else {
        let mut r = stage2_march(obj, &s1.x0, &stage1.direction, s2)?;
        if fp < r.best.f {
            r.best = BestPoint { x: p, f: fp };
        }
        r
    };
    report.evaluations += stage1.evaluations + probe_evals;
    report.zero_progress = stage1.zero_progress;
    Ok(report)
}

/// Bound check along unit direction `u` when the minimizer is known. `None`
/// when there is no minimizer or `x0` already is it.
pub fn bound_for(obj: &Objective, x0: &Point, u: &Point, alpha: f64) -> Result<Option<BoundCheck>> {
    let (Some(x_star), Some(f_star)) = (obj.known_minimizer(), obj.known_min_value()) else {
        return Ok(None);
    };
    let r = x0.dist(x_star);
    let Some(d0) = (x_star - x0).normalized() else {
        return Ok(None);
    };
    let m_star = march_index(r, alpha);
    let x_m = x0.offset(m_star as f64 * alpha, u);
    let lhs = obj.evaluate(&x_m)?.to_f64() - f_star;
    error_bound(obj.lipschitz_k(), r, alpha, u, &d0, lhs).map(Some)
}

/// Bound check that insists on a known minimizer.
pub fn required_bound(obj: &Objective, x0: &Point, u: &Point, alpha: f64) -> Result<BoundCheck> {
    if obj.known_minimizer().is_none() {
        return Err(Error::BoundUnavailable(format!(
            "{} has no known minimizer",
            obj.id()
        )));
    }
    bound_for(obj, x0, u, alpha)?
        .ok_or_else(|| Error::BoundUnavailable("x0 is the minimizer".into()))
}
