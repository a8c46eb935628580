//! Registry of benchmark objectives with canonical sample clouds.

mod families;
mod piecewise;

pub use families::{lsc_family, radial_family};
pub use piecewise::PiecewiseLinear;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Domain, DomainKind, Objective, Point, SampleCloud};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    Convex,
    Radial,
    Lsc,
    UniqueMin,
    Nonconvex,
    Counterexample,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Convex => "convex",
            Tag::Radial => "radial",
            Tag::Lsc => "lsc",
            Tag::UniqueMin => "unique-min",
            Tag::Nonconvex => "nonconvex",
            Tag::Counterexample => "counterexample",
        })
    }
}

/// Shape parameters; `None` picks the entry's default.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FunctionParams {
    pub mesh: Option<f64>,
    pub dimension: Option<usize>,
    pub center: Option<Point>,
    pub kappa: Option<f64>,
    /// Truncation radius `R`, or the half-width of a box domain.
    pub radius: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub id: String,
    pub objective: Objective,
    pub tags: BTreeSet<Tag>,
    pub mesh: f64,
    /// Abscissae of the canonical cloud.
    pub sample_points: Vec<Point>,
    /// Suggested descent start and ball radius.
    pub start: Point,
    pub delta: f64,
}

impl RegistryEntry {
    pub fn has(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn canonical_cloud(&self) -> Result<SampleCloud> {
        let values =
            self.sample_points
                .iter()
                .map(|x| {
                    self.objective.evaluate(x)?.value().ok_or_else(|| {
                        Error::InvalidInput(format!("sample {x} is outside the domain"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
        SampleCloud::new(self.sample_points.clone(), values)
    }
}

pub const FUNCTION_IDS: [&str; 10] = [
    "abs1d",
    "aniso_quadratic",
    "lsc_counterexample",
    "lsc_family",
    "norm_radial",
    "plateau_flat",
    "radial_family",
    "sq_radial",
    "unbounded_counterexample_truncated",
    "w_piecewise",
];

pub fn list_functions() -> Vec<(String, BTreeSet<Tag>)> {
    FUNCTION_IDS
        .iter()
        .map(|id| {
            let e = get_function(id, &FunctionParams::default()).expect("defaults are valid");
            (id.to_string(), e.tags)
        })
        .collect()
}

pub fn get_function(id: &str, params: &FunctionParams) -> Result<RegistryEntry> {
    if let Some(h) = params.mesh {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "mesh must be positive, got {h}"
            )));
        }
    }
    match id {
        "abs1d" => abs1d(params),
        "aniso_quadratic" => aniso_quadratic(params),
        "lsc_counterexample" => lsc_counterexample(params),
        "lsc_family" => lsc_family(params.dimension.unwrap_or(1), params.seed.unwrap_or(0)),
        "norm_radial" => radial_entry(params, false),
        "plateau_flat" => plateau_flat(params),
        "radial_family" => radial_family(params.dimension.unwrap_or(2), params.seed.unwrap_or(0)),
        "sq_radial" => radial_entry(params, true),
        "unbounded_counterexample_truncated" => unbounded_truncated(params),
        "w_piecewise" => w_piecewise(params),
        other => Err(Error::UnknownFunction(other.to_string())),
    }
}

fn tags(list: &[Tag]) -> BTreeSet<Tag> {
    list.iter().copied().collect()
}

/// `lo + (hi - lo) i / N` with `N = round((hi - lo) / mesh)`.
pub(crate) fn axis_grid(lo: f64, hi: f64, mesh: f64) -> Vec<f64> {
    let n = (((hi - lo) / mesh).round() as usize).max(1);
    (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect()
}

/// Tensor grid over a box, first coordinate varying slowest.
pub(crate) fn box_grid(lower: &Point, upper: &Point, mesh: f64) -> Vec<Point> {
    let axes: Vec<Vec<f64>> = (0..lower.dim())
        .map(|i| axis_grid(lower[i], upper[i], mesh))
        .collect();
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|c| Point::new(c).expect("finite grid"))
        .collect()
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn abs1d(params: &FunctionParams) -> Result<RegistryEntry> {
    let mesh = params.mesh.unwrap_or(0.1);
    let objective = Objective::new("abs1d", Domain::closed_interval(-1.0, 1.0)?, 1.0, |x| {
        x[0].abs()
    })?
    .with_minimizer(Point::scalar(0.0), 0.0)?
    .with_subgradient(|x| Point::scalar(if x[0] == 0.0 { 0.0 } else { x[0].signum() }))
    .with_preconditions_verified(true);
    Ok(RegistryEntry {
        id: "abs1d".into(),
        objective,
        tags: tags(&[Tag::Convex, Tag::Lsc, Tag::Radial, Tag::UniqueMin]),
        mesh,
        sample_points: axis_grid(-1.0, 1.0, mesh)
            .into_iter()
            .map(Point::scalar)
            .collect(),
        start: Point::scalar(0.8),
        delta: 0.2,
    })
}

fn dimension_and_center(params: &FunctionParams) -> Result<(usize, Point)> {
    match (&params.center, params.dimension) {
        (Some(c), Some(n)) => {
            c.check_dim(n)?;
            Ok((n, c.clone()))
        }
        (Some(c), None) => Ok((c.dim(), c.clone())),
        (None, Some(0)) => Err(Error::InvalidInput("dimension must be at least 1".into())),
        (None, n) => {
            let n = n.unwrap_or(2);
            Ok((n, Point::zeros(n)))
        }
    }
}

/// `|x - c|` or `|x - c|^2` on the box `c +- a`.
fn radial_entry(params: &FunctionParams, squared: bool) -> Result<RegistryEntry> {
    let (n, c) = dimension_and_center(params)?;
    let a = positive("radius", params.radius.unwrap_or(3.0))?;
    let mesh = params.mesh.unwrap_or(a / 2.0);
    let domain = Domain::cube(&c, a)?;
    let (lower, upper) = domain.bounding_box();
    let id = if squared { "sq_radial" } else { "norm_radial" };
    let cc = c.clone();
    let objective = if squared {
        let cg = c.clone();
        Objective::new(id, domain, 2.0 * a * (n as f64).sqrt(), move |x| {
            let d = x - &cc;
            d.dot(&d)
        })?
        .with_subgradient(move |x| (x - &cg).scale(2.0))
    } else {
        let cg = c.clone();
        Objective::new(id, domain, 1.0, move |x| x.dist(&cc))?.with_subgradient(move |x| {
            (x - &cg)
                .normalized()
                .unwrap_or_else(|| Point::zeros(x.dim()))
        })
    }
    .with_minimizer(c.clone(), 0.0)?
    .with_preconditions_verified(true);
    let mut start = c.clone().into_coords();
    start[0] += 1.0;
    if squared {
        start.iter_mut().skip(1).for_each(|v| *v += 1.0);
    }
    Ok(RegistryEntry {
        id: id.into(),
        objective,
        tags: tags(&[Tag::Convex, Tag::Lsc, Tag::Radial, Tag::UniqueMin]),
        mesh,
        sample_points: box_grid(&lower, &upper, mesh),
        start: Point::new(start)?,
        delta: 0.5,
    })
}

/// `x1^2 + kappa x2^2` on `[-3, 3]^2`.
fn aniso_quadratic(params: &FunctionParams) -> Result<RegistryEntry> {
    let kappa = positive("kappa", params.kappa.unwrap_or(10.0))?;
    let a = positive("radius", params.radius.unwrap_or(3.0))?;
    let mesh = params.mesh.unwrap_or(a / 2.0);
    let origin = Point::zeros(2);
    let domain = Domain::cube(&origin, a)?;
    let (lower, upper) = domain.bounding_box();
    let k = 2.0 * a * (1.0 + kappa * kappa).sqrt();
    let objective = Objective::new("aniso_quadratic", domain, k, move |x| {
        x[0] * x[0] + kappa * x[1] * x[1]
    })?
    .with_subgradient(move |x| Point::new(vec![2.0 * x[0], 2.0 * kappa * x[1]]).expect("finite"))
    .with_minimizer(origin, 0.0)?
    .with_preconditions_verified(true);
    Ok(RegistryEntry {
        id: "aniso_quadratic".into(),
        objective,
        tags: tags(&[Tag::Convex, Tag::Lsc, Tag::UniqueMin]),
        mesh,
        sample_points: box_grid(&lower, &upper, mesh),
        start: Point::new(vec![1.0, 1.0])?,
        delta: 0.1,
    })
}

/// `0` at the origin, `x - 1/2` on `(1/2, 1]`, `+inf` elsewhere. Not lower
/// semicontinuous at `1/2`.
fn lsc_counterexample(params: &FunctionParams) -> Result<RegistryEntry> {
    let h = params.mesh.unwrap_or(0.01);
    let domain = Domain::new(DomainKind::Union(vec![
        Domain::closed_interval(0.0, 0.0)?,
        Domain::new(DomainKind::Interval {
            lo: 0.5,
            hi: 1.0,
            lo_open: true,
            hi_open: false,
        })?,
    ]))?;
    let objective = Objective::new("lsc_counterexample", domain, 1.0, |x| {
        if x[0] <= 0.5 {
            0.0
        } else {
            x[0] - 0.5
        }
    })?
    .with_minimizer(Point::scalar(0.0), 0.0)?
    .with_preconditions_verified(false);
    let n = ((0.5 / h).round() as usize).max(1);
    let mut sample_points = vec![Point::scalar(0.0)];
    sample_points.extend((1..=n).map(|k| Point::scalar(0.5 + 0.5 * k as f64 / n as f64)));
    Ok(RegistryEntry {
        id: "lsc_counterexample".into(),
        objective,
        tags: tags(&[Tag::Counterexample, Tag::Nonconvex, Tag::UniqueMin]),
        mesh: h,
        sample_points,
        start: Point::scalar(0.8),
        delta: 0.1,
    })
}

/// `|x|` on `[-1, 1]` and `1` out to `+-R`: the unbounded-domain
/// counterexample cut off at a finite radius.
fn unbounded_truncated(params: &FunctionParams) -> Result<RegistryEntry> {
    let r = params.radius.unwrap_or(5.0);
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "truncation radius must be >= 1, got {r}"
        )));
    }
    let mesh = params.mesh.unwrap_or(0.1);
    let objective = Objective::new(
        "unbounded_counterexample_truncated",
        Domain::closed_interval(-r, r)?,
        1.0,
        |x| x[0].abs().min(1.0),
    )?
    .with_minimizer(Point::scalar(0.0), 0.0)?
    .with_preconditions_verified(true);
    Ok(RegistryEntry {
        id: "unbounded_counterexample_truncated".into(),
        objective,
        tags: tags(&[
            Tag::Counterexample,
            Tag::Nonconvex,
            Tag::Lsc,
            Tag::UniqueMin,
        ]),
        mesh,
        sample_points: axis_grid(-r, r, mesh)
            .into_iter()
            .map(Point::scalar)
            .collect(),
        start: Point::scalar(0.8),
        delta: 0.2,
    })
}

fn pl_entry(
    id: &str,
    pl: PiecewiseLinear,
    minimizer: f64,
    tag_list: &[Tag],
    mesh: f64,
    start: f64,
    delta: f64,
) -> Result<RegistryEntry> {
    let (lo, hi) = pl.span();
    let k = pl.lipschitz();
    let f_min = pl.eval(minimizer);
    let objective = Objective::new(id, Domain::closed_interval(lo, hi)?, k, move |x| {
        pl.eval(x[0])
    })?
    .with_minimizer(Point::scalar(minimizer), f_min)?
    .with_preconditions_verified(tag_list.contains(&Tag::UniqueMin));
    Ok(RegistryEntry {
        id: id.into(),
        objective,
        tags: tags(tag_list),
        mesh,
        sample_points: axis_grid(lo, hi, mesh)
            .into_iter()
            .map(Point::scalar)
            .collect(),
        start: Point::scalar(start),
        delta,
    })
}

fn w_piecewise(params: &FunctionParams) -> Result<RegistryEntry> {
    let pl = PiecewiseLinear::new(vec![
        (-1.0, 0.8),
        (-0.5, 0.2),
        (0.0, 0.5),
        (0.5, 0.0),
        (1.0, 0.9),
    ])?;
    pl_entry(
        "w_piecewise",
        pl,
        0.5,
        &[Tag::Nonconvex, Tag::Lsc, Tag::UniqueMin],
        params.mesh.unwrap_or(0.05),
        0.75,
        0.2,
    )
}

/// `max(0, |x| - 1/2)`: convex, minimized on a whole interval.
fn plateau_flat(params: &FunctionParams) -> Result<RegistryEntry> {
    let pl = PiecewiseLinear::new(vec![(-1.0, 0.5), (-0.5, 0.0), (0.5, 0.0), (1.0, 0.5)])?;
    pl_entry(
        "plateau_flat",
        pl,
        0.0,
        &[Tag::Convex, Tag::Lsc],
        params.mesh.unwrap_or(0.1),
        0.9,
        0.2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get(id: &str) -> RegistryEntry {
        get_function(id, &FunctionParams::default()).unwrap()
    }

    #[test]
    fn listing_is_sorted_and_complete() {
        let ids: Vec<String> = list_functions().into_iter().map(|(id, _)| id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        for required in [
            "lsc_counterexample",
            "unbounded_counterexample_truncated",
            "abs1d",
            "norm_radial",
            "sq_radial",
            "aniso_quadratic",
            "w_piecewise",
            "plateau_flat",
        ] {
            assert!(ids.iter().any(|i| i == required), "{required}");
        }
    }

    #[test]
    fn tags_cover_the_documented_sets() {
        let all: std::collections::BTreeMap<_, _> = list_functions().into_iter().collect();
        assert!(
            all["lsc_counterexample"].is_superset(&tags(&[Tag::Counterexample, Tag::Nonconvex]))
        );
        assert!(all["sq_radial"].is_superset(&tags(&[Tag::Convex, Tag::Radial, Tag::UniqueMin])));
        assert!(!all["plateau_flat"].contains(&Tag::UniqueMin));
    }

    #[test]
    fn lsc_counterexample_cloud() {
        let e = get("lsc_counterexample");
        let c = e.canonical_cloud().unwrap();
        assert_eq!(c.len(), 51);
        assert_eq!(c.point(0)[0], 0.0);
        assert_eq!(c.value(0), 0.0);
        assert!((c.point(1)[0] - 0.51).abs() < 1e-15);
        assert!((c.value(1) - 0.01).abs() < 1e-15);
        assert_eq!(c.point(50)[0], 1.0);
        assert_eq!(c.value(50), 0.5);
        assert!(e
            .objective
            .evaluate(&Point::scalar(0.3))
            .unwrap()
            .is_infinite());
        assert!(e
            .objective
            .evaluate(&Point::scalar(0.5))
            .unwrap()
            .is_infinite());
        assert!(!e.objective.preconditions_verified());
    }

    #[test]
    fn truncated_counterexample_values() {
        let e = get("unbounded_counterexample_truncated");
        let f = |x: f64| e.objective.evaluate(&Point::scalar(x)).unwrap().to_f64();
        assert_eq!(f(0.5), 0.5);
        assert_eq!(f(3.0), 1.0);
        assert!(f(5.5).is_infinite());
        assert_eq!(e.sample_points.len(), 101);
    }

    #[test]
    fn w_lipschitz_and_minimizer() {
        let e = get("w_piecewise");
        assert_eq!(e.objective.lipschitz_k(), 1.8);
        assert_eq!(e.objective.known_minimizer().unwrap()[0], 0.5);
        assert_eq!(e.objective.known_min_value(), Some(0.0));
    }

    #[test]
    fn unique_min_entries_have_a_margin() {
        for (id, t) in list_functions() {
            let e = get(&id);
            let cloud = e.canonical_cloud().unwrap();
            if t.contains(&Tag::UniqueMin) {
                assert!(cloud.unique_argmin(1e-9).is_some(), "{id}");
            }
        }
    }

    #[test]
    fn canonical_clouds_regenerate_identically() {
        for id in FUNCTION_IDS {
            let a = get(id).canonical_cloud().unwrap();
            let b = get(id).canonical_cloud().unwrap();
            assert_eq!(a, b, "{id}");
        }
    }

    #[test]
    fn two_dimensional_grid_contains_the_center() {
        let e = get("sq_radial");
        assert_eq!(e.sample_points.len(), 25);
        assert!(e.sample_points.iter().any(|p| p.norm() == 0.0));
        let shifted = get_function(
            "norm_radial",
            &FunctionParams {
                center: Some(Point::new(vec![0.5, -0.25, 1.0]).unwrap()),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(shifted.objective.dimension(), 3);
        assert_eq!(shifted.sample_points.len(), 125);
    }

    #[test]
    fn unknown_ids_and_bad_params_fail() {
        assert!(matches!(
            get_function("rosenbrock", &FunctionParams::default()),
            Err(Error::UnknownFunction(_))
        ));
        let bad = FunctionParams {
            kappa: Some(-1.0),
            ..Default::default()
        };
        assert!(get_function("aniso_quadratic", &bad).is_err());
    }
}
