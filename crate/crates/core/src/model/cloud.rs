use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::model::Point;

/// Two samples closer than this are the same point.
pub const DUPLICATE_TOL: f64 = 1e-12;

/// Finite samples `(x_k, f(x_k))` of an objective's effective domain.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleCloud {
    points: Vec<Point>,
    values: Vec<f64>,
    dim: usize,
}

impl SampleCloud {
    /// Strict constructor: rejects duplicates, mixed dimensions and non-finite values.
    pub fn new(points: Vec<Point>, values: Vec<f64>) -> Result<Self> {
        let dim = Self::check_shape(&points, &values)?;
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i].dist(&points[j]) < DUPLICATE_TOL {
                    return Err(Error::DuplicatePoint {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(SampleCloud {
            points,
            values,
            dim,
        })
    }

    /// Lenient constructor: duplicates are merged keeping the lower value
    /// (the envelope is an infimum). The first occurrence keeps its position.
    pub fn merged(points: Vec<Point>, values: Vec<f64>) -> Result<Self> {
        let dim = Self::check_shape(&points, &values)?;
        let mut kept_pts: Vec<Point> = Vec::with_capacity(points.len());
        let mut kept_vals: Vec<f64> = Vec::with_capacity(values.len());
        for (p, v) in points.into_iter().zip(values) {
            match kept_pts.iter().position(|q| q.dist(&p) < DUPLICATE_TOL) {
                Some(k) => kept_vals[k] = kept_vals[k].min(v),
                None => {
                    kept_pts.push(p);
                    kept_vals.push(v);
                }
            }
        }
        Ok(SampleCloud {
            points: kept_pts,
            values: kept_vals,
            dim,
        })
    }

    fn check_shape(points: &[Point], values: &[f64]) -> Result<usize> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidInput("sample cloud needs at least one point".into()))?;
        if points.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        let dim = first.dim();
        for p in points {
            p.check_dim(dim)?;
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "cloud values must be finite, got {v}"
            )));
        }
        Ok(dim)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Index of the stored sample within `tol` of `x`, lowest index first.
    pub fn find(&self, x: &Point, tol: f64) -> Option<usize> {
        self.points.iter().position(|p| p.dist(x) <= tol)
    }

    /// Sub-cloud of the flagged indices, order preserved.
    pub fn select(&self, keep: impl Fn(usize) -> bool) -> Result<SampleCloud> {
        let (points, values): (Vec<Point>, Vec<f64>) = (0..self.len())
            .filter(|&i| keep(i))
            .map(|i| (self.points[i].clone(), self.values[i]))
            .unzip();
        SampleCloud::new(points, values)
    }

    /// `max - min` of the stored values.
    pub fn value_range(&self) -> f64 {
        let lo = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self
            .values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }

    /// Index of the minimum value and the gap to the second-lowest value, if
    /// that gap exceeds `margin`. Ties resolve to the lowest index.
    pub fn unique_argmin(&self, margin: f64) -> Option<(usize, f64)> {
        let best = argmin_of(&self.values);
        let second = self
            .values
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != best)
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min);
        let gap = second - self.values[best];
        (gap > margin).then_some((best, gap))
    }

    /// Largest pairwise slope `|f_i - f_j| / |x_i - x_j|`.
    pub fn empirical_lipschitz(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::UndefinedEstimate);
        }
        let mut best: f64 = 0.0;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let slope =
                    (self.values[i] - self.values[j]).abs() / self.points[i].dist(&self.points[j]);
                best = best.max(slope);
            }
        }
        Ok(best)
    }

    /// Reads the `x1,...,xn,f` CSV format. Lines starting with `#` are skipped.
    pub fn read_csv<R: Read>(reader: R) -> Result<SampleCloud> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let cols = headers.len();
        if cols < 2 {
            return Err(Error::Csv(
                "need at least one coordinate column and `f`".into(),
            ));
        }
        for (i, h) in headers.iter().enumerate() {
            let want = if i + 1 == cols {
                "f".to_string()
            } else {
                format!("x{}", i + 1)
            };
            if h != want {
                return Err(Error::Csv(format!(
                    "header column {i} is `{h}`, expected `{want}`"
                )));
            }
        }
        let mut points = Vec::new();
        let mut values = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let nums = rec
                .iter()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::Csv(format!("row {}: bad number `{t}`", row + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            values.push(nums[cols - 1]);
            points.push(Point::new(nums[..cols - 1].to_vec())?);
        }
        SampleCloud::new(points, values)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut header: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        header.push("f".into());
        writeln!(w, "{}", header.join(","))?;
        for (p, v) in self.points.iter().zip(&self.values) {
            let mut row: Vec<String> = p.coords().iter().map(|c| fmt_num(*c)).collect();
            row.push(fmt_num(*v));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// 17 significant digits, round-trip exact.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "inf".into()
    }
}

pub(crate) fn argmin_of(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> SampleCloud {
        let xs: Vec<f64> = (0..=n)
            .map(|i| lo + (hi - lo) * i as f64 / n as f64)
            .collect();
        SampleCloud::new(
            xs.iter().map(|&x| Point::scalar(x)).collect(),
            xs.iter().map(|&x| f(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn lipschitz_of_abs_on_mesh() {
        let c = grid(-1.0, 1.0, 20, f64::abs);
        assert!((c.empirical_lipschitz().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_of_w_vertices() {
        let c = SampleCloud::new(
            [-1.0, -0.5, 0.0, 0.5, 1.0].map(Point::scalar).to_vec(),
            vec![0.8, 0.2, 0.5, 0.0, 0.9],
        )
        .unwrap();
        assert!((c.empirical_lipschitz().unwrap() - 1.8).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_of_square_is_mesh_limited() {
        let c = grid(-1.0, 1.0, 20, |x| x * x);
        assert!((c.empirical_lipschitz().unwrap() - 1.9).abs() < 1e-12);
    }

    #[test]
    fn single_point_has_no_estimate() {
        let c = SampleCloud::new(vec![Point::scalar(0.0)], vec![1.0]).unwrap();
        assert_eq!(c.empirical_lipschitz(), Err(Error::UndefinedEstimate));
    }

    #[test]
    fn duplicates_rejected_or_merged_low() {
        let pts = vec![Point::scalar(0.0), Point::scalar(1e-13), Point::scalar(1.0)];
        assert!(matches!(
            SampleCloud::new(pts.clone(), vec![1.0, 0.5, 2.0]),
            Err(Error::DuplicatePoint {
                first: 0,
                second: 1
            })
        ));
        let m = SampleCloud::merged(pts, vec![1.0, 0.5, 2.0]).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.values(), &[0.5, 2.0]);
    }

    #[test]
    fn non_finite_values_rejected() {
        assert!(SampleCloud::new(vec![Point::scalar(0.0)], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let c = SampleCloud::new(
            vec![
                Point::new(vec![0.1, -1.0 / 3.0]).unwrap(),
                Point::new(vec![2.0, 1e-300]).unwrap(),
            ],
            vec![std::f64::consts::PI, -0.0],
        )
        .unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2,f\n"));
        let back = SampleCloud::read_csv(&buf[..]).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn csv_rejects_bad_header() {
        let text = "a,f\n1,2\n";
        assert!(SampleCloud::read_csv(text.as_bytes()).is_err());
        let ok = "# comment\nx1,f\n1,2\n";
        assert_eq!(SampleCloud::read_csv(ok.as_bytes()).unwrap().len(), 1);
    }
}
