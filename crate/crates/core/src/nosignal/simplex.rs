//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Solves `maximize c·x  s.t.  A x = b, x >= 0` with `b >= 0`. The problems
//! here have at most 64 variables and ~56 rows, so a full dense tableau with
//! an incrementally updated reduced-cost row is the robust choice; artificial
//! variables provide the phase-1 basis and are pivoted out (or their
//! redundant rows dropped) before phase 2.

use crate::tol;
use crate::{Error, Result};

/// Equality-form linear program with implicit bounds `0 <= x`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    /// One dense row per equality constraint.
    pub constraints: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl LinearProgram {
    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_rows(&self) -> usize {
        self.constraints.len()
    }
}

#[derive(Debug, Clone)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Reduced costs of the original variables at the optimum (all <= tol
    /// for a maximization optimum).
    pub reduced_costs: Vec<f64>,
}

impl SimplexSolution {
    /// max_j |x_j * reduced_cost_j|; near zero at a true optimum.
    pub fn complementary_slackness_residual(&self) -> f64 {
        self.x.iter().zip(&self.reduced_costs).map(|(x, r)| (x * r).abs()).fold(0.0, f64::max)
    }
}

struct Tableau {
    /// rows[i][j], j < n_total columns; artificials sit after the originals.
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    /// Reduced-cost row d_j = c_j - c_B B^-1 A_j, updated on each pivot.
    cost_row: Vec<f64>,
    objective_value: f64,
    basis: Vec<usize>,
    n_original: usize,
}

impl Tableau {
    fn new(lp: &LinearProgram) -> Result<Self> {
        let m = lp.n_rows();
        let n = lp.n_vars();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (row, &b) in lp.constraints.iter().zip(&lp.rhs) {
            if row.len() != n {
                return Err(Error::ShapeMismatch("constraint row length".into()));
            }
            // Normalize to b >= 0 so artificials start feasible.
            let (mut r, mut b) = (row.clone(), b);
            if b < 0.0 {
                for v in r.iter_mut() {
                    *v = -*v;
                }
                b = -b;
            }
            r.resize(n + m, 0.0);
            rows.push(r);
            rhs.push(b);
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row[n + i] = 1.0;
        }
        let basis: Vec<usize> = (n..n + m).collect();
        Ok(Self {
            rows,
            rhs,
            cost_row: vec![0.0; n + m],
            objective_value: 0.0,
            basis,
            n_original: n,
        })
    }

    /// Install an objective and price it out against the current basis.
    fn set_objective(&mut self, costs: &[f64]) {
        self.cost_row.iter_mut().for_each(|d| *d = 0.0);
        self.cost_row[..costs.len()].copy_from_slice(costs);
        self.objective_value = 0.0;
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = if b < costs.len() { costs[b] } else { 0.0 };
            if cb != 0.0 {
                let (rows, cost_row) = (&self.rows, &mut self.cost_row);
                for (d, a) in cost_row.iter_mut().zip(&rows[i]) {
                    *d -= cb * a;
                }
                self.objective_value += cb * self.rhs[i];
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col];
        let inv = 1.0 / piv;
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        self.rhs[row] *= inv;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row];
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col];
            if factor != 0.0 {
                for (v, p) in r.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
                r[col] = 0.0;
                self.rhs[i] -= factor * pivot_rhs;
            }
        }
        let factor = self.cost_row[col];
        if factor != 0.0 {
            for (d, p) in self.cost_row.iter_mut().zip(&pivot_row) {
                *d -= factor * p;
            }
            self.cost_row[col] = 0.0;
            self.objective_value += factor * pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Bland's rule: enter the lowest-index improving column among the
    /// allowed ones, leave by minimum ratio with ties on the lowest basis
    /// variable index. Returns false when optimal.
    fn iterate(&mut self, allow_artificial: bool) -> Result<bool> {
        let limit = if allow_artificial { self.cost_row.len() } else { self.n_original };
        let entering = (0..limit).find(|&j| self.cost_row[j] > tol::LP_PIVOT);
        let Some(col) = entering else { return Ok(false) };

        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..self.rows.len() {
            let a = self.rows[i][col];
            if a > tol::LP_PIVOT {
                let ratio = self.rhs[i] / a;
                let better = match leaving {
                    None => true,
                    Some((best_row, best_ratio)) => {
                        ratio < best_ratio - 1e-15
                            || (ratio <= best_ratio + 1e-15 && self.basis[i] < self.basis[best_row])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leaving else { return Err(Error::Unbounded) };
        self.pivot(row, col);
        Ok(true)
    }

    fn run(&mut self, allow_artificial: bool) -> Result<()> {
        // Generous cap; Bland's rule guarantees finite termination anyway.
        let max_pivots = 50_000;
        for _ in 0..max_pivots {
            if !self.iterate(allow_artificial)? {
                return Ok(());
            }
        }
        Err(Error::Infeasible(f64::NAN))
    }
}

/// Solve the LP. Errors with [`Error::Infeasible`] when the equality system
/// admits no nonnegative solution and [`Error::Unbounded`] when the optimum
/// is infinite.
pub fn maximize(lp: &LinearProgram) -> Result<SimplexSolution> {
    let mut t = Tableau::new(lp)?;
    let n = t.n_original;
    let m = t.rows.len();

    // Phase 1: drive the artificial variables to zero.
    let phase1: Vec<f64> = (0..n + m).map(|j| if j >= n { -1.0 } else { 0.0 }).collect();
    t.set_objective(&phase1);
    t.run(true)?;
    if t.objective_value < -tol::LP_RESIDUAL {
        return Err(Error::Infeasible(-t.objective_value));
    }

    // Pivot leftover zero-level artificials out of the basis; rows with no
    // original coefficient left are redundant and dropped.
    let mut row = 0;
    while row < t.rows.len() {
        if t.basis[row] >= n {
            if let Some(col) = (0..n).find(|&j| t.rows[row][j].abs() > tol::LP_PIVOT) {
                t.pivot(row, col);
                row += 1;
            } else {
                t.rows.remove(row);
                t.rhs.remove(row);
                t.basis.remove(row);
            }
        } else {
            row += 1;
        }
    }

    // Phase 2 over the original objective, artificials barred from entering.
    let mut phase2 = lp.objective.clone();
    phase2.resize(n + m, 0.0);
    t.set_objective(&phase2);
    t.run(false)?;

    let mut x = vec![0.0; n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs[i];
        }
    }
    let value = lp.objective.iter().zip(&x).map(|(c, xi)| c * xi).sum();
    let reduced_costs = t.cost_row[..n].to_vec();
    Ok(SimplexSolution { x, value, reduced_costs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tiny_lp() {
        // max x0 + 2 x1  s.t.  x0 + x1 = 1  ->  x = (0, 1), value 2.
        let lp = LinearProgram {
            objective: vec![1.0, 2.0],
            constraints: vec![vec![1.0, 1.0]],
            rhs: vec![1.0],
        };
        let sol = maximize(&lp).unwrap();
        assert!((sol.value - 2.0).abs() < 1e-12);
        assert!((sol.x[1] - 1.0).abs() < 1e-12);
        assert!(sol.complementary_slackness_residual() < 1e-12);
    }

    #[test]
    fn handles_redundant_rows() {
        // Same constraint twice.
        let lp = LinearProgram {
            objective: vec![3.0, 1.0],
            constraints: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            rhs: vec![1.0, 1.0],
        };
        let sol = maximize(&lp).unwrap();
        assert!((sol.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible() {
        // x0 = 1 and x0 = 2 cannot both hold.
        let lp = LinearProgram {
            objective: vec![1.0],
            constraints: vec![vec![1.0], vec![1.0]],
            rhs: vec![1.0, 2.0],
        };
        assert!(matches!(maximize(&lp), Err(Error::Infeasible(_))));
    }

    #[test]
    fn detects_unbounded() {
        // No constraint ties down x1 - x0 ... use a free direction:
        // max x0  s.t.  x0 - x1 = 0 lets both grow without bound.
        let lp = LinearProgram {
            objective: vec![1.0, 0.0],
            constraints: vec![vec![1.0, -1.0]],
            rhs: vec![0.0],
        };
        assert!(matches!(maximize(&lp), Err(Error::Unbounded)));
    }

    #[test]
    fn degenerate_vertices_terminate() {
        // Multiple constraints meeting at the same vertex.
        let lp = LinearProgram {
            objective: vec![1.0, 1.0, 0.0],
            constraints: vec![vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 2.0]],
            rhs: vec![1.0, 1.0, 2.0],
        };
        let sol = maximize(&lp).unwrap();
        assert!((sol.value - 2.0).abs() < 1e-12);
    }
}
