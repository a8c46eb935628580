use std::fs::File;
use std::time::Instant;

use serde::Serialize;

use super::options::{parse_list, Opts};
use super::output::{emit, json_document, Cell, Echo, Table};
use super::Property;
use crate::descent::{
    directional_descent, stage2_march, BestPoint, BoundCheck, Stage1Config, Stage1Solver,
    Stage2Config, TracePoint,
};
use crate::envelope::{
    absolute_tolerance, convexity_radius, convexity_set, lce_value, DEFAULT_CONVEXITY_TOL,
};
use crate::error::{Error, Result};
use crate::model::{Domain, DomainKind, Objective, Point, SampleCloud};
use crate::oracles::{
    check_caratheodory, check_envelope_oracle, check_envelope_restriction,
    check_minimizer_preservation, check_monotone_segment, check_optimal_direction,
    check_subgradient_equivalence, DirectionSweep, DEFAULT_SEGMENT_GRID, UNIQUENESS_TOL,
};
use crate::testfns::{get_function, FunctionParams, RegistryEntry, FUNCTION_IDS};

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_BENCH_ALPHAS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
pub const DEFAULT_BENCH_FUNCTIONS: [&str; 6] = [
    "abs1d",
    "aniso_quadratic",
    "norm_radial",
    "sq_radial",
    "unbounded_counterexample_truncated",
    "w_piecewise",
];

/// The function a command works on: an objective and its sample cloud.
struct Target {
    id: String,
    entry: Option<RegistryEntry>,
    objective: Objective,
    cloud: SampleCloud,
}

fn params(opts: &Opts) -> Result<FunctionParams> {
    Ok(FunctionParams {
        mesh: opts.mesh,
        dimension: opts.n,
        center: opts.center.as_deref().map(Point::parse).transpose()?,
        kappa: opts.kappa,
        radius: opts.radius,
        seed: opts.seed,
    })
}

fn target_for(id: &str, opts: &Opts, echo: &mut Echo) -> Result<Target> {
    echo.set("fn", id);
    if let Some(path) = id.strip_prefix("file:") {
        let file = File::open(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        let cloud = SampleCloud::read_csv(file)?;
        let objective = Objective::from_cloud(id, &cloud)?;
        return Ok(Target {
            id: id.to_string(),
            entry: None,
            objective,
            cloud,
        });
    }
    let p = params(opts)?;
    let entry = get_function(id, &p)?;
    echo.set("mesh", entry.mesh);
    for (key, v) in [("kappa", p.kappa), ("radius", p.radius)] {
        if let Some(v) = v {
            echo.set(key, v);
        }
    }
    if let Some(n) = p.dimension {
        echo.set("n", n);
    }
    if let Some(c) = &p.center {
        echo.set("center", c);
    }
    if let Some(s) = p.seed {
        echo.set("seed", s);
    }
    Ok(Target {
        id: id.to_string(),
        objective: entry.objective.clone(),
        cloud: entry.canonical_cloud()?,
        entry: Some(entry),
    })
}

fn target(opts: &Opts, echo: &mut Echo) -> Result<Target> {
    let id = opts
        .function
        .clone()
        .ok_or_else(|| Error::InvalidInput("--fn is required".into()))?;
    target_for(&id, opts, echo)
}

fn start(t: &Target, opts: &Opts) -> Result<Point> {
    match (&opts.x0, &t.entry) {
        (Some(s), _) => Point::parse(s),
        (None, Some(e)) => Ok(e.start.clone()),
        (None, None) => Err(Error::InvalidInput(
            "--x0 is required for file clouds".into(),
        )),
    }
}

fn delta(t: &Target, opts: &Opts) -> Result<f64> {
    match (opts.delta, &t.entry) {
        (Some(d), _) => Ok(d),
        (None, Some(e)) => Ok(e.delta),
        (None, None) => Err(Error::InvalidInput(
            "--delta is required for file clouds".into(),
        )),
    }
}

fn solver(opts: &Opts) -> Result<Stage1Solver> {
    let mut s: Stage1Solver = opts.solver.as_deref().unwrap_or("compass-search").parse()?;
    if let (Stage1Solver::AngularGrid { directions }, Some(d)) = (&mut s, opts.directions) {
        *directions = d;
    }
    Ok(s)
}

fn header(n: usize, tail: &[&str]) -> Vec<String> {
    (1..=n)
        .map(|i| format!("x{i}"))
        .chain(tail.iter().map(|s| s.to_string()))
        .collect()
}

fn coords(x: &Point) -> impl Iterator<Item = Cell> + '_ {
    x.coords().iter().map(|&v| Cell::Num(v))
}

fn query_grid(cloud: &SampleCloud, per_axis: usize) -> Result<Vec<Point>> {
    let n = cloud.dim();
    let lo: Vec<f64> = (0..n)
        .map(|i| {
            cloud
                .points()
                .iter()
                .map(|p| p[i])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let hi: Vec<f64> = (0..n)
        .map(|i| {
            cloud
                .points()
                .iter()
                .map(|p| p[i])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let steps = per_axis.max(2) - 1;
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for i in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                let (a, b) = (lo[i], hi[i]);
                (0..=steps).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(a + (b - a) * k as f64 / steps as f64);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Point::new).collect()
}

fn default_grid(n: usize) -> usize {
    match n {
        1 => 101,
        2 => 21,
        _ => 5,
    }
}

pub fn lce(opts: &Opts) -> Result<i32> {
    let mut echo = Echo::new("lce");
    let t = target(opts, &mut echo)?;
    let tol = opts.tol.unwrap_or(DEFAULT_CONVEXITY_TOL);
    let per_axis = opts.grid.unwrap_or_else(|| default_grid(t.cloud.dim()));
    echo.set("tol", tol);
    echo.set("grid", per_axis);
    let abs_tol = absolute_tolerance(&t.cloud, tol);

    let mut table = Table::new(&echo, &header(t.cloud.dim(), &["lce", "gap", "in_Af"]))?;
    for q in query_grid(&t.cloud, per_axis)? {
        let env = lce_value(&t.cloud, &q)?.value;
        let f = t.objective.evaluate(&q)?;
        let mut row: Vec<Cell> = coords(&q).collect();
        row.push(Cell::Num(env.to_f64()));
        match env.value() {
            Some(e) => {
                let gap = f.to_f64() - e;
                row.push(Cell::Num(gap));
                row.push(Cell::Bool(gap <= abs_tol));
            }
            None => {
                row.push(Cell::Empty);
                row.push(Cell::Bool(false));
            }
        }
        table.row(&row);
    }
    emit(opts.out.as_deref(), &table.into_string())?;
    Ok(0)
}

pub fn convexity(opts: &Opts) -> Result<i32> {
    let mut echo = Echo::new("convexity");
    let t = target(opts, &mut echo)?;
    let tol = opts.tol.unwrap_or(DEFAULT_CONVEXITY_TOL);
    echo.set("tol", tol);
    let radius = match &opts.x0 {
        Some(s) => {
            let x0 = Point::parse(s)?;
            echo.set("x0", &x0);
            Some(convexity_radius(&t.cloud, &x0, tol)?)
        }
        None => None,
    };
    let mask = convexity_set(&t.cloud, tol)?;
    let mut table = Table::new(&echo, &header(t.cloud.dim(), &["f", "lce", "gap", "in_Af"]))?;
    table.comment(&format!(
        "points_of_convexity: {} of {}",
        mask.count(),
        t.cloud.len()
    ));
    if let Some(r) = radius {
        table.comment(&format!("convexity_radius: {}", crate::model::fmt_num(r)));
    }
    for k in 0..t.cloud.len() {
        let mut row: Vec<Cell> = coords(t.cloud.point(k)).collect();
        row.extend([
            Cell::Num(t.cloud.value(k)),
            Cell::Num(mask.envelope[k]),
            Cell::Num(mask.gaps[k]),
            Cell::Bool(mask.flags[k]),
        ]);
        table.row(&row);
    }
    emit(opts.out.as_deref(), &table.into_string())?;
    Ok(0)
}

#[derive(Serialize)]
struct DescendOutput<'a> {
    function: &'a str,
    x0: &'a Point,
    delta: f64,
    alpha: f64,
    solver: String,
    seed: u64,
    d_star: &'a Point,
    skipped_stage2: bool,
    zero_progress: bool,
    trace: &'a [TracePoint],
    best: &'a BestPoint,
    evaluations: usize,
    bound: &'a Option<BoundCheck>,
    preconditions_verified: bool,
}

pub fn descend(opts: &Opts) -> Result<i32> {
    let mut echo = Echo::new("descend");
    let t = target(opts, &mut echo)?;
    let x0 = start(&t, opts)?;
    let delta = delta(&t, opts)?;
    let alpha = opts.alpha.unwrap_or(DEFAULT_ALPHA);
    let solver = solver(opts)?;
    let seed = opts.seed.unwrap_or(0);
    let budget = opts.budget.unwrap_or(crate::descent::DEFAULT_BUDGET);
    echo.set("x0", &x0);
    echo.set("delta", delta);
    echo.set("alpha", alpha);
    echo.set("solver", solver.to_string());
    if let Stage1Solver::AngularGrid { directions } = solver {
        echo.set("directions", directions);
    }
    echo.set("seed", seed);
    echo.set("budget", budget);

    let s1 = Stage1Config::new(x0.clone(), delta)?
        .with_solver(solver)
        .with_budget(budget)
        .with_seed(seed);
    let s2 = Stage2Config::new(alpha)?;
    let report = directional_descent(&t.objective, &s1, &s2)?;
    let out = DescendOutput {
        function: &t.id,
        x0: &x0,
        delta,
        alpha,
        solver: solver.to_string(),
        seed,
        d_star: &report.d_star,
        skipped_stage2: report.skipped_stage2,
        zero_progress: report.zero_progress,
        trace: &report.trace,
        best: &report.best,
        evaluations: report.evaluations,
        bound: &report.bound,
        preconditions_verified: report.preconditions_verified,
    };
    emit(opts.out.as_deref(), &json_document(&echo, &out)?)?;
    Ok(0)
}

fn parse_points(s: &str) -> Result<Vec<Point>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(Point::parse)
        .collect()
}

pub fn verify(property: Property, opts: &Opts) -> Result<i32> {
    let mut echo = Echo::new("verify");
    echo.set("property", property.name());
    let report = match property {
        Property::Direction => {
            let t = target(opts, &mut echo)?;
            let x0 = start(&t, opts)?;
            let delta = delta(&t, opts)?;
            let mut sweep = DirectionSweep::for_dim(t.objective.dimension());
            if let Some(d) = opts.directions {
                sweep.directions = d;
            }
            if let Some(l) = opts.levels {
                sweep.levels = l;
            }
            echo.set("x0", &x0);
            echo.set("delta", delta);
            echo.set("directions", sweep.directions);
            echo.set("levels", sweep.levels);
            check_optimal_direction(&t.objective, &x0, delta, sweep)?
        }
        Property::Monotone => {
            let t = target(opts, &mut echo)?;
            let x0 = start(&t, opts)?;
            let grid = opts.grid.unwrap_or(DEFAULT_SEGMENT_GRID);
            echo.set("x0", &x0);
            echo.set("grid", grid);
            check_monotone_segment(&t.objective, &x0, grid)?
        }
        Property::Envelope => {
            let t = target(opts, &mut echo)?;
            let per_axis = opts.grid.unwrap_or(match t.cloud.dim() {
                1 => 41,
                _ => 9,
            });
            echo.set("grid", per_axis);
            let queries = query_grid(&t.cloud, per_axis)?;
            check_envelope_oracle(&t.cloud, &t.id, &queries)?
        }
        Property::Caratheodory => {
            let n = opts.n.unwrap_or(2);
            let count = opts.count.unwrap_or(1000);
            let seed = opts.seed.unwrap_or(0);
            echo.set("n", n);
            echo.set("count", count);
            echo.set("seed", seed);
            check_caratheodory(n, count, seed)?
        }
        Property::Preservation => {
            let t = target(opts, &mut echo)?;
            let tol = opts.tol.unwrap_or(UNIQUENESS_TOL);
            let probes = opts
                .probes
                .as_deref()
                .map(parse_points)
                .transpose()?
                .unwrap_or_default();
            echo.set("tol", tol);
            echo.set("probes", &probes);
            check_minimizer_preservation(&t.cloud, &t.id, &probes, tol)?
        }
        Property::Restriction => {
            let t = target(opts, &mut echo)?;
            let tol = opts.tol.unwrap_or(DEFAULT_CONVEXITY_TOL);
            echo.set("tol", tol);
            check_envelope_restriction(&t.cloud, &t.id, tol)?
        }
        Property::Subgradient => {
            let t = target(opts, &mut echo)?;
            let tol = opts.tol.unwrap_or(DEFAULT_CONVEXITY_TOL);
            echo.set("tol", tol);
            check_subgradient_equivalence(&t.cloud, &t.id, tol)?
        }
    };
    emit(opts.out.as_deref(), &json_document(&echo, &report)?)?;
    Ok(if report.passed { 0 } else { 1 })
}

fn bench_functions(opts: &Opts) -> Vec<String> {
    match &opts.function {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
        None => DEFAULT_BENCH_FUNCTIONS
            .iter()
            .map(|s| s.to_string())
            .collect(),
    }
}

pub fn bench(opts: &Opts) -> Result<i32> {
    let mut echo = Echo::new("bench");
    // Rows follow function id order, whatever order the ids were given in.
    let mut ids = bench_functions(opts);
    ids.sort();
    ids.dedup();
    let alphas = match &opts.alphas {
        Some(s) => parse_list(s)?,
        None => DEFAULT_BENCH_ALPHAS.to_vec(),
    };
    let deltas = opts.deltas.as_deref().map(parse_list).transpose()?;
    let solver = solver(opts)?;
    let seed = opts.seed.unwrap_or(0);
    let budget = opts.budget.unwrap_or(crate::descent::DEFAULT_BUDGET);
    let timing = opts.timing.unwrap_or(false);
    echo.set("fn", &ids);
    echo.set("alphas", &alphas);
    echo.set("deltas", &deltas);
    echo.set("solver", solver.to_string());
    echo.set("seed", seed);
    echo.set("budget", budget);
    echo.set("timing", timing);
    let p = params(opts)?;
    echo.set("params", &p);

    let cols = [
        "function",
        "mode",
        "delta",
        "alpha",
        "f_best_minus_f_star",
        "k_alpha",
        "k_r_dist",
        "lhs",
        "rhs",
        "satisfied",
        "evaluations",
        "wall_time_s",
    ];
    let mut table = Table::new(&echo, &cols.map(String::from))?;
    for id in &ids {
        if id.starts_with("file:") {
            return Err(Error::InvalidInput(
                "bench runs over registry ids only".into(),
            ));
        }
        let entry = get_function(id, &p)?;
        let obj = &entry.objective;
        let (Some(x_star), Some(f_star)) = (obj.known_minimizer(), obj.known_min_value()) else {
            table.comment(&format!("skipped {id}: no known minimizer"));
            continue;
        };
        let Some(d0) = (x_star - &entry.start).normalized() else {
            table.comment(&format!("skipped {id}: start is the minimizer"));
            continue;
        };
        for &delta in deltas.as_deref().unwrap_or(&[entry.delta]) {
            for &alpha in &alphas {
                let clock = Instant::now();
                let s1 = Stage1Config::new(entry.start.clone(), delta)?
                    .with_solver(solver)
                    .with_budget(budget)
                    .with_seed(seed);
                let s2 = Stage2Config::new(alpha)?;
                let descended = match directional_descent(obj, &s1, &s2) {
                    Ok(r) => r,
                    Err(e @ Error::InvalidBall { .. }) => {
                        table.comment(&format!("skipped {id} delta={delta}: {e}"));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let t_descend = clock.elapsed().as_secs_f64();
                let clock = Instant::now();
                let exact = stage2_march(obj, &entry.start, &d0, &s2)?;
                let t_exact = clock.elapsed().as_secs_f64();

                for (mode, r, secs) in [
                    ("descend", &descended, t_descend),
                    ("exact_d0", &exact, t_exact),
                ] {
                    let b = r
                        .bound
                        .as_ref()
                        .expect("minimizer is known and differs from start");
                    table.row(&[
                        Cell::Text(id.clone()),
                        Cell::Text(mode.into()),
                        Cell::Num(delta),
                        Cell::Num(alpha),
                        Cell::Num(r.best.f.to_f64() - f_star),
                        Cell::Num(b.k * alpha),
                        Cell::Num(b.k * b.r * b.dist),
                        Cell::Num(b.lhs),
                        Cell::Num(b.rhs),
                        Cell::Bool(b.satisfied),
                        Cell::Int(r.evaluations),
                        if timing { Cell::Num(secs) } else { Cell::Empty },
                    ]);
                }
            }
        }
    }
    emit(opts.out.as_deref(), &table.into_string())?;
    Ok(0)
}

pub fn list(opts: &Opts) -> Result<i32> {
    let echo = Echo::new("list");
    let mut table = Table::new(
        &echo,
        &[
            "id".into(),
            "tags".into(),
            "dimension".into(),
            "domain".into(),
        ],
    )?;
    for id in FUNCTION_IDS {
        let e = get_function(id, &FunctionParams::default())?;
        let tags: Vec<String> = e.tags.iter().map(|t| t.to_string()).collect();
        table.row(&[
            Cell::Text(id.into()),
            Cell::Text(tags.join(";")),
            Cell::Int(e.objective.dimension()),
            Cell::Text(domain_label(e.objective.domain()).into()),
        ]);
    }
    emit(opts.out.as_deref(), &table.into_string())?;
    Ok(0)
}

fn domain_label(d: &Domain) -> &'static str {
    match d.kind() {
        DomainKind::Box { .. } => "box",
        DomainKind::Ball { .. } => "ball",
        DomainKind::Hull { .. } => "hull",
        DomainKind::Interval { .. } => "interval",
        DomainKind::Union(_) => "union",
    }
}
