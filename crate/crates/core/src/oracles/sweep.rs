use std::f64::consts::PI;

use crate::model::Point;

/// `count` unit vectors in the plane at angles `2 pi j / count`.
pub fn angle_grid(count: usize) -> Vec<Point> {
    (0..count)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / count as f64;
            Point::new(vec![th.cos(), th.sin()]).expect("finite")
        })
        .collect()
}

/// `count` near-uniform unit vectors on the 2-sphere (golden-angle spiral).
pub fn fibonacci_sphere(count: usize) -> Vec<Point> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let th = golden * i as f64;
            Point::new(vec![r * th.cos(), r * th.sin(), z]).expect("finite")
        })
        .collect()
}

/// Deterministic directions on the unit sphere of `R^n`: `{-1, +1}` for
/// `n = 1`, an angle grid for `n = 2`, a Fibonacci sphere for `n = 3`.
/// Higher dimensions fall back to the signed axes.
pub fn unit_directions(n: usize, count: usize) -> Vec<Point> {
    match n {
        1 => vec![Point::scalar(-1.0), Point::scalar(1.0)],
        2 => angle_grid(count),
        3 => fibonacci_sphere(count),
        _ => (0..n)
            .flat_map(|i| [Point::axis(n, i, 1.0), Point::axis(n, i, -1.0)])
            .collect(),
    }
}
