use crate::error::{Error, Result};

/// A 1-D piecewise-linear function given by its vertices, evaluated by
/// interpolation between neighbours.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    vertices: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput("need at least two vertices".into()));
        }
        if vertices
            .iter()
            .any(|(x, f)| !x.is_finite() || !f.is_finite())
        {
            return Err(Error::NotANumber);
        }
        if vertices.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidInput("vertex abscissae must increase".into()));
        }
        Ok(PiecewiseLinear { vertices })
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn span(&self) -> (f64, f64) {
        (self.vertices[0].0, self.vertices[self.vertices.len() - 1].0)
    }

    /// Largest absolute edge slope.
    pub fn lipschitz(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
            .fold(0.0, f64::max)
    }

    /// Callers keep `x` inside [`span`](Self::span); outside it the end edges
    /// are extended.
    pub fn eval(&self, x: f64) -> f64 {
        let v = &self.vertices;
        let k = v.partition_point(|p| p.0 < x).clamp(1, v.len() - 1);
        let (a, b) = (v[k - 1], v[k]);
        if x == b.0 {
            return b.1;
        }
        a.1 + (x - a.0) / (b.0 - a.0) * (b.1 - a.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_and_hits_vertices_exactly() {
        let pl =
            PiecewiseLinear::new(vec![(-1.0, 0.8), (-0.5, 0.2), (0.0, 0.5), (0.5, 0.0)]).unwrap();
        for &(x, f) in pl.vertices() {
            assert_eq!(pl.eval(x), f);
        }
        assert!((pl.eval(-0.75) - 0.5).abs() < 1e-15);
        assert!((pl.lipschitz() - 1.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_unsorted_vertices() {
        assert!(PiecewiseLinear::new(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(PiecewiseLinear::new(vec![(0.0, 0.0)]).is_err());
    }
}
