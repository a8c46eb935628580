use dirdescent::descent::{directional_descent, Stage1Config, Stage2Config};
use dirdescent::envelope::{convexity_set, lce_value, DEFAULT_CONVEXITY_TOL};
use dirdescent::hull_lp::{caratheodory_reduce, WeightedCombination};
use dirdescent::model::{Point, SampleCloud};
use dirdescent::oracles::{check_optimal_direction, lce_bruteforce, DirectionSweep};
use dirdescent::testfns::{get_function, FunctionParams, RegistryEntry, Tag, FUNCTION_IDS};
use proptest::prelude::*;

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, n)
}

fn cloud(n: usize, max: usize) -> impl Strategy<Value = SampleCloud> {
    prop::collection::vec((coords(n), -1.0..1.0f64), 2..=max).prop_filter_map(
        "duplicate points",
        |rows| {
            let (points, values): (Vec<_>, Vec<_>) = rows
                .into_iter()
                .map(|(x, f)| (Point::new(x).unwrap(), f))
                .unzip();
            SampleCloud::new(points, values).ok()
        },
    )
}

fn entry(id: &str) -> RegistryEntry {
    get_function(id, &FunctionParams::default()).unwrap()
}

fn convex_entries() -> Vec<RegistryEntry> {
    FUNCTION_IDS
        .iter()
        .map(|id| entry(id))
        .filter(|e| e.has(Tag::Convex))
        .collect()
}

/// Maps `t` in `[0, 1]^n` into the bounding box of the entry's domain.
fn in_box(e: &RegistryEntry, t: &[f64]) -> Point {
    let (lo, hi) = e.objective.domain().bounding_box();
    Point::new(
        t.iter()
            .enumerate()
            .map(|(i, s)| lo[i] + s * (hi[i] - lo[i]))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn caratheodory_keeps_barycenter_and_value(
        n in 1usize..=3,
        rows in prop::collection::vec((coords(3), 0.01..1.0f64, -1.0..1.0f64), 5..=12),
    ) {
        let points: Vec<Point> = rows.iter().map(|r| Point::new(r.0[..n].to_vec()).unwrap()).collect();
        let total: f64 = rows.iter().map(|r| r.1).sum();
        let weights: Vec<f64> = rows.iter().map(|r| r.1 / total).collect();
        let values: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let combo = WeightedCombination::new(points, weights).unwrap();
        let red = caratheodory_reduce(&combo, Some(&values)).unwrap();
        let before = combo.barycenter().unwrap();
        let after = red.combination.barycenter().unwrap();
        prop_assert!(before.dist(&after) <= 1e-9);
        prop_assert!(red.combination.len() <= n + 1);
        prop_assert!(red.combination.weights().iter().all(|&w| w >= 0.0));
        let kept: Vec<f64> = red.source.iter().map(|&k| values[k]).collect();
        let (v0, v1) = (combo.weighted_value(&values), red.combination.weighted_value(&kept));
        prop_assert!(v1 <= v0 + 1e-12, "{v1} > {v0}");
    }

    #[test]
    fn envelope_lp_matches_enumeration(c in cloud(2, 12), q in coords(2)) {
        let x = Point::new(q).unwrap();
        let lp = lce_value(&c, &x).unwrap().value;
        let brute = lce_bruteforce(&c, &x).unwrap();
        match (lp.value(), brute.value()) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-8, "{a} vs {b}"),
            (a, b) => prop_assert_eq!(a.is_none(), b.is_none()),
        }
    }

    #[test]
    fn envelope_support_reproduces_the_query(c in cloud(2, 15), q in coords(2)) {
        let x = Point::new(q).unwrap();
        let cert = lce_value(&c, &x).unwrap();
        if cert.value.is_finite() {
            prop_assert!(cert.support.len() <= 3);
            prop_assert!(cert.support.barycenter().unwrap().dist(&x) <= 1e-8);
        } else {
            prop_assert!(cert.support.is_empty());
        }
    }

    #[test]
    fn envelope_lies_below_samples_and_is_tight_on_flags(c in cloud(1, 20)) {
        let mask = convexity_set(&c, DEFAULT_CONVEXITY_TOL).unwrap();
        for (k, &f) in c.values().iter().enumerate() {
            prop_assert!(mask.envelope[k] <= f + 1e-9);
            prop_assert_eq!(mask.flags[k], mask.gaps[k] <= mask.tolerance);
        }
    }

    #[test]
    fn convex_entries_are_midpoint_convex(
        which in 0usize..8,
        a in prop::collection::vec(0.0..1.0f64, 2),
        b in prop::collection::vec(0.0..1.0f64, 2),
    ) {
        let entries = convex_entries();
        let e = &entries[which % entries.len()];
        let n = e.objective.dimension();
        let (x, y) = (in_box(e, &a[..n]), in_box(e, &b[..n]));
        let mid = x.offset(0.5, &(&y - &x));
        let f = |p: &Point| e.objective.evaluate(p).unwrap().to_f64();
        prop_assert!(f(&mid) <= 0.5 * (f(&x) + f(&y)) + 1e-12, "{}", e.id);
    }

    #[test]
    fn radial_entries_are_rotation_invariant(
        which in 0usize..3,
        r in 0.0..2.5f64,
        theta in 0.0..std::f64::consts::TAU,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let e = entry(["sq_radial", "norm_radial", "radial_family"][which]);
        let c = e.objective.known_minimizer().unwrap().clone();
        let at = |t: f64| {
            let u = Point::new(vec![t.cos(), t.sin()]).unwrap();
            e.objective.evaluate(&c.offset(r, &u)).unwrap().to_f64()
        };
        let (a, b) = (at(theta), at(phi));
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn direction_witnesses_replay(x in 0.3..2.0f64, y in 0.3..2.0f64, delta in 0.02..0.25f64) {
        let e = entry("aniso_quadratic");
        let x0 = Point::new(vec![x, y]).unwrap();
        let sweep = DirectionSweep { directions: 90, levels: 3 };
        let r = check_optimal_direction(&e.objective, &x0, delta, sweep).unwrap();
        for w in &r.violations {
            prop_assert!(w.margin > 0.0);
            prop_assert!((w.replay(&e.objective).unwrap() - w.margin).abs() <= 1e-9);
        }
    }

    #[test]
    fn descent_on_a_cone_respects_the_bound(
        t in prop::collection::vec(0.2..0.8f64, 2),
        delta in 0.05..0.3f64,
        alpha in 0.01..0.3f64,
    ) {
        let e = entry("norm_radial");
        let x0 = in_box(&e, &t);
        prop_assume!(e.objective.domain().contains_ball(&x0, delta));
        let s1 = Stage1Config::new(x0, delta).unwrap();
        let rep = directional_descent(&e.objective, &s1, &Stage2Config::new(alpha).unwrap()).unwrap();
        prop_assert!((rep.d_star.norm() - delta).abs() <= 1e-9);
        if let Some(b) = rep.bound {
            prop_assert!(b.satisfied, "{b:?}");
        }
        for (i, p) in rep.trace.iter().enumerate() {
            prop_assert_eq!(p.m, i);
        }
    }
}
