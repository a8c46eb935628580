//! Dense two-phase primal simplex with Bland's rule.
//!
//! Standard form: minimize `c'x` subject to `Ax = b`, `x >= 0`. Problems here
//! have a handful of rows and at most a few hundred columns, so a full tableau
//! is the simplest thing that is fast enough.

use crate::error::{Error, Result};

pub const PIVOT_TOL: f64 = 1e-10;
pub const FEASIBILITY_TOL: f64 = 1e-8;
const ITERATION_FACTOR: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, constraints: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        if constraints.len() != rhs.len() {
            return Err(Error::InvalidInput(format!(
                "{} constraint rows but {} right-hand sides",
                constraints.len(),
                rhs.len()
            )));
        }
        if let Some(row) = constraints.iter().find(|r| r.len() != objective.len()) {
            return Err(Error::InvalidInput(format!(
                "constraint row has {} columns, objective has {}",
                row.len(),
                objective.len()
            )));
        }
        let all_finite = objective.iter().chain(rhs.iter()).all(|v| v.is_finite())
            && constraints.iter().flatten().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidInput("non-finite LP data".into()));
        }
        Ok(LpProblem {
            objective,
            constraints,
            rhs,
        })
    }

    pub fn rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn cols(&self) -> usize {
        self.objective.len()
    }

    /// Largest absolute residual of `Ax = b`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; `NaN` unless optimal.
    pub value: f64,
    /// Primal solution; empty unless optimal.
    pub x: Vec<f64>,
}

impl LpSolution {
    fn infeasible() -> Self {
        LpSolution {
            status: LpStatus::Infeasible,
            value: f64::NAN,
            x: Vec::new(),
        }
    }

    fn unbounded() -> Self {
        LpSolution {
            status: LpStatus::Unbounded,
            value: f64::NAN,
            x: Vec::new(),
        }
    }
}

struct Tableau {
    /// `rows x (cols + 1)`; last column is the right-hand side.
    t: Vec<Vec<f64>>,
    /// Reduced costs, last entry is minus the objective value.
    cost: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
    cap: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let rhs = self.rhs_col();
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col];
            if factor != 0.0 {
                for j in 0..=rhs {
                    r[j] -= factor * pivot_row[j];
                }
                r[col] = 0.0;
            }
        }
        let factor = self.cost[col];
        if factor != 0.0 {
            for j in 0..=rhs {
                self.cost[j] -= factor * pivot_row[j];
            }
            self.cost[col] = 0.0;
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Sets the cost row for `costs` (one per column, rhs excluded).
    fn price(&mut self, costs: &[f64]) {
        let rhs = self.rhs_col();
        let mut cost = vec![0.0; rhs + 1];
        cost[..rhs].copy_from_slice(costs);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = costs[b];
            if cb != 0.0 {
                for j in 0..=rhs {
                    cost[j] -= cb * self.t[i][j];
                }
            }
        }
        for &b in &self.basis {
            cost[b] = 0.0;
        }
        self.cost = cost;
    }

    /// Bland's rule: lowest-index improving column, then lowest-index basic
    /// variable among the minimum-ratio rows.
    fn run(&mut self, allowed: usize) -> Result<Outcome> {
        let rhs = self.rhs_col();
        loop {
            let entering = (0..allowed).find(|&j| self.cost[j] < -PIVOT_TOL);
            let Some(col) = entering else {
                return Ok(Outcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.t.len() {
                let a = self.t[i][col];
                if a > PIVOT_TOL {
                    let ratio = self.t[i][rhs].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                            if ratio < best && !tie || tie && self.basis[i] < self.basis[k] {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            if self.pivots >= self.cap {
                return Err(Error::SolverStalled {
                    iterations: self.pivots,
                });
            }
            self.pivot(row, col);
        }
    }
}

/// Solves `p` to optimality, or reports infeasibility or unboundedness.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    let (m, n) = (p.rows(), p.cols());
    if m == 0 {
        // Only the sign constraints remain.
        return Ok(if p.objective.iter().any(|c| *c < 0.0) {
            LpSolution::unbounded()
        } else {
            LpSolution {
                status: LpStatus::Optimal,
                value: 0.0,
                x: vec![0.0; n],
            }
        });
    }

    // Phase one tableau: original columns, one artificial per row, rhs.
    let width = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, (row, &b)) in p.constraints.iter().zip(&p.rhs).enumerate() {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let mut r = vec![0.0; width + 1];
        for (j, a) in row.iter().enumerate() {
            r[j] = sign * a;
        }
        r[n + i] = 1.0;
        r[width] = sign * b;
        t.push(r);
    }
    let mut tab = Tableau {
        t,
        cost: vec![0.0; width + 1],
        basis: (n..n + m).collect(),
        pivots: 0,
        cap: ITERATION_FACTOR * (n + m),
    };

    let mut phase_one_costs = vec![0.0; width];
    for c in &mut phase_one_costs[n..] {
        *c = 1.0;
    }
    tab.price(&phase_one_costs);
    tab.run(width)?;
    let infeasibility = -tab.cost[width];
    let scale = p.rhs.iter().fold(1.0f64, |a, b| a.max(b.abs()));
    if infeasibility > FEASIBILITY_TOL * scale {
        return Ok(LpSolution::infeasible());
    }

    // Drive remaining artificials out of the basis. Rows with no usable
    // original column are redundant and stay pinned to their artificial.
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.t[i][j].abs() > PIVOT_TOL) {
                tab.pivot(i, j);
            }
        }
    }

    let mut phase_two_costs = vec![0.0; width];
    phase_two_costs[..n].copy_from_slice(&p.objective);
    tab.price(&phase_two_costs);
    match tab.run(n)? {
        Outcome::Unbounded => return Ok(LpSolution::unbounded()),
        Outcome::Optimal => {}
    }

    let mut x = vec![0.0; n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.t[i][width];
        }
    }
    let value = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_the_cheaper_vertex_of_the_simplex() {
        let p = LpProblem::new(vec![5.0, 1.0], vec![vec![1.0, 1.0]], vec![1.0]).unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!((s.x[0]).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_row_with_nonzero_rhs_is_infeasible() {
        let p = LpProblem::new(vec![1.0], vec![vec![0.0]], vec![1.0]).unwrap();
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        // min -x1 s.t. x1 - x2 = 0
        let p = LpProblem::new(vec![-1.0, 0.0], vec![vec![1.0, -1.0]], vec![0.0]).unwrap();
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn handles_redundant_rows_and_negative_rhs() {
        // x1 + x2 = -(-2), duplicated; min x1 - x2.
        let p = LpProblem::new(
            vec![1.0, -1.0],
            vec![vec![-1.0, -1.0], vec![2.0, 2.0]],
            vec![-2.0, 4.0],
        )
        .unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value + 2.0).abs() < 1e-12);
        assert!(p.residual(&s.x) < 1e-12);
    }

    #[test]
    fn rejects_malformed_problems() {
        assert!(LpProblem::new(vec![1.0], vec![vec![1.0, 2.0]], vec![1.0]).is_err());
        assert!(LpProblem::new(vec![1.0], vec![vec![1.0]], vec![]).is_err());
        assert!(LpProblem::new(vec![f64::NAN], vec![vec![1.0]], vec![1.0]).is_err());
    }

    #[test]
    fn envelope_lp_on_lsc_counterexample_cloud() {
        // {0} u {0.51, ..., 1.00}, f = 0 at 0 and x - 1/2 elsewhere.
        let mut xs = vec![0.0];
        let mut fs = vec![0.0];
        for k in 1..=50 {
            let x = 0.5 + 0.5 * k as f64 / 50.0;
            xs.push(x);
            fs.push(x - 0.5);
        }
        let p = LpProblem::new(fs, vec![xs, vec![1.0; 51]], vec![0.25, 1.0]).unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 0.25 * 0.01 / 0.51).abs() < 1e-12);
        assert!((s.value - 0.0049020).abs() < 1e-7);
    }
}
