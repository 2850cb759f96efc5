// SPDX-License-Identifier: Apache-2.0

//! Dense two-phase tableau simplex.
//!
//! Solves `min c'x` subject to linear rows and `x >= 0`. Pricing is
//! Dantzig's rule with ties broken by the lowest column index; after a run of
//! degenerate pivots the solver switches to Bland's rule until the objective
//! moves again, which rules out cycling. The ratio test breaks ties by the
//! lowest basic variable index, so a given model always follows the same
//! pivot sequence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// Sparse row `sum coeffs  relation  rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    /// Residual `lhs - rhs` at `x`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum::<f64>() - self.rhs
    }

    pub fn satisfied(&self, x: &[f64], tol: f64) -> bool {
        let res = self.residual(x);
        let scale = tol * self.rhs.abs().max(1.0);
        match self.relation {
            Relation::Ge => res >= -scale,
            Relation::Le => res <= scale,
            Relation::Eq => res.abs() <= scale,
        }
    }
}

/// `min objective'x` over `rows`, `x >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions {
    /// Reduced-cost and feasibility tolerance.
    pub tol: f64,
    pub max_pivots: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degenerate_limit: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_pivots: 50_000,
            degenerate_limit: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

const PIVOT_TOL: f64 = 1e-11;

struct Tableau {
    /// `(m + 1) x (n + 1)`; the last row holds reduced costs, the last
    /// column the right-hand side.
    data: Vec<f64>,
    width: usize,
    m: usize,
    basis: Vec<usize>,
    pivots: usize,
    trace: Vec<f64>,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.at(row, col);
        for v in &mut self.data[row * w..(row + 1) * w] {
            *v /= p;
        }
        let (before, rest) = self.data.split_at_mut(row * w);
        let (prow, after) = rest.split_at_mut(w);
        for chunk in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = chunk[col];
            if f != 0.0 {
                for (v, &pv) in chunk.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                chunk[col] = 0.0;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
        self.trace.push(-self.at(self.m, w - 1));
    }

    /// Runs the simplex loop on the current reduced-cost row. Columns at or
    /// beyond `allowed` never enter.
    fn optimize(&mut self, allowed: usize, opts: &SimplexOptions) -> Result<()> {
        let m = self.m;
        let rhs_col = self.width - 1;
        let mut degenerate = 0usize;
        loop {
            if self.pivots >= opts.max_pivots {
                return Err(Error::Numerical {
                    message: format!("pivot limit {} exceeded", opts.max_pivots),
                    iterations: self.pivots,
                    trace: std::mem::take(&mut self.trace),
                });
            }
            let bland = degenerate >= opts.degenerate_limit;
            let mut entering = None;
            let mut best = -opts.tol;
            for j in 0..allowed {
                let d = self.at(m, j);
                if d < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(col) = entering else {
                return Ok(());
            };

            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.at(i, col);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    leaving = match leaving {
                        None => Some((i, ratio)),
                        Some((k, r)) => {
                            let tie = (ratio - r).abs() <= 1e-12 * r.abs().max(1.0);
                            if ratio < r && !tie || tie && self.basis[i] < self.basis[k] {
                                Some((i, ratio))
                            } else {
                                Some((k, r))
                            }
                        }
                    };
                }
            }
            let Some((row, ratio)) = leaving else {
                return Err(Error::Unbounded);
            };
            if ratio <= opts.tol {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, col);
            debug_assert!(self.at(m, rhs_col).is_finite());
        }
    }
}

/// Solves the program; see the module docs for the pivoting rules.
pub fn solve(lp: &LinearProgram, opts: &SimplexOptions) -> Result<LpOutcome> {
    let n = lp.num_vars;
    if lp.objective.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "objective has {} coefficients for {n} variables",
            lp.objective.len()
        )));
    }
    if let Some(bad) = lp
        .rows
        .iter()
        .flat_map(|r| r.coeffs.iter())
        .find(|(j, a)| *j >= n || !a.is_finite())
    {
        return Err(Error::invalid(format!(
            "row coefficient ({}, {}) is out of range or not finite",
            bad.0, bad.1
        )));
    }

    // Normalise to non-negative right-hand sides.
    let rows: Vec<Row> = lp
        .rows
        .iter()
        .map(|r| {
            if r.rhs < 0.0 {
                Row {
                    coeffs: r.coeffs.iter().map(|&(j, a)| (j, -a)).collect(),
                    relation: match r.relation {
                        Relation::Ge => Relation::Le,
                        Relation::Le => Relation::Ge,
                        Relation::Eq => Relation::Eq,
                    },
                    rhs: -r.rhs,
                }
            } else {
                r.clone()
            }
        })
        .collect();

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.relation != Relation::Le).count();
    let art_start = n + n_slack;
    let width = art_start + n_art + 1;
    let mut t = Tableau {
        data: vec![0.0; (m + 1) * width],
        width,
        m,
        basis: vec![0; m],
        pivots: 0,
        trace: Vec::new(),
    };

    let (mut s, mut a) = (n, art_start);
    for (i, row) in rows.iter().enumerate() {
        let base = i * width;
        for &(j, v) in &row.coeffs {
            t.data[base + j] += v;
        }
        t.data[base + width - 1] = row.rhs;
        match row.relation {
            Relation::Le => {
                t.data[base + s] = 1.0;
                t.basis[i] = s;
                s += 1;
            }
            Relation::Ge => {
                t.data[base + s] = -1.0;
                s += 1;
                t.data[base + a] = 1.0;
                t.basis[i] = a;
                a += 1;
            }
            Relation::Eq => {
                t.data[base + a] = 1.0;
                t.basis[i] = a;
                a += 1;
            }
        }
    }

    // Phase 1: minimise the sum of artificials.
    let obj = m * width;
    if n_art > 0 {
        for i in 0..m {
            if t.basis[i] >= art_start {
                for j in 0..width {
                    if j < art_start || j == width - 1 {
                        t.data[obj + j] -= t.data[i * width + j];
                    }
                }
            }
        }
        t.optimize(art_start, opts)?;
        let infeasibility = -t.at(m, width - 1);
        let scale = rows.iter().map(|r| r.rhs).fold(1.0, f64::max);
        if infeasibility > opts.tol.max(1e-9) * scale * 10.0 {
            return Err(Error::Infeasible);
        }
        // Drive artificials out of the basis where possible. Rows with no
        // usable pivot are redundant and keep a zero-valued artificial.
        for i in 0..m {
            if t.basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| t.at(i, j).abs() > 1e-9) {
                    t.pivot(i, j);
                }
            }
        }
    }

    // Phase 2.
    for j in 0..width {
        t.data[obj + j] = if j < n { lp.objective[j] } else { 0.0 };
    }
    for i in 0..m {
        let cb = if t.basis[i] < n {
            lp.objective[t.basis[i]]
        } else {
            0.0
        };
        if cb != 0.0 {
            for j in 0..width {
                t.data[obj + j] -= cb * t.data[i * width + j];
            }
        }
    }
    t.optimize(art_start, opts)?;

    let mut x = vec![0.0; n];
    for i in 0..m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rhs(i).max(0.0);
        }
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome {
        x,
        objective,
        pivots: t.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn row(coeffs: &[(usize, f64)], relation: Relation, rhs: f64) -> Row {
        Row::new(coeffs.to_vec(), relation, rhs)
    }

    #[test]
    fn textbook_maximisation() {
        // max 3a + 5b s.t. a <= 4, 2b <= 12, 3a + 2b <= 18  ->  (2, 6), 36.
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![-3.0, -5.0],
            rows: vec![
                row(&[(0, 1.0)], Relation::Le, 4.0),
                row(&[(1, 2.0)], Relation::Le, 12.0),
                row(&[(0, 3.0), (1, 2.0)], Relation::Le, 18.0),
            ],
        };
        let out = solve(&lp, &SimplexOptions::default()).unwrap();
        assert_relative_eq!(out.objective, -36.0, epsilon = 1e-9);
        assert_relative_eq!(out.x[0], 2.0, epsilon = 1e-9);
        assert_relative_eq!(out.x[1], 6.0, epsilon = 1e-9);
    }

    #[test]
    fn ge_and_eq_rows_need_phase_one() {
        // min a + b s.t. a + 2b >= 4, a - b = 1  ->  a = 2, b = 1.
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![1.0, 1.0],
            rows: vec![
                row(&[(0, 1.0), (1, 2.0)], Relation::Ge, 4.0),
                row(&[(0, 1.0), (1, -1.0)], Relation::Eq, 1.0),
            ],
        };
        let out = solve(&lp, &SimplexOptions::default()).unwrap();
        assert_relative_eq!(out.x[0], 2.0, epsilon = 1e-9);
        assert_relative_eq!(out.x[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn negative_rhs_is_normalised() {
        // -a <= -3  is  a >= 3.
        let lp = LinearProgram {
            num_vars: 1,
            objective: vec![1.0],
            rows: vec![row(&[(0, -1.0)], Relation::Le, -3.0)],
        };
        let out = solve(&lp, &SimplexOptions::default()).unwrap();
        assert_relative_eq!(out.x[0], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let infeasible = LinearProgram {
            num_vars: 1,
            objective: vec![1.0],
            rows: vec![
                row(&[(0, 1.0)], Relation::Ge, 2.0),
                row(&[(0, 1.0)], Relation::Le, 1.0),
            ],
        };
        assert!(matches!(
            solve(&infeasible, &SimplexOptions::default()),
            Err(Error::Infeasible)
        ));
        let unbounded = LinearProgram {
            num_vars: 1,
            objective: vec![-1.0],
            rows: vec![row(&[(0, 1.0)], Relation::Ge, 2.0)],
        };
        assert!(matches!(
            solve(&unbounded, &SimplexOptions::default()),
            Err(Error::Unbounded)
        ));
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![1.0, 2.0],
            rows: vec![
                row(&[(0, 1.0), (1, 1.0)], Relation::Eq, 3.0),
                row(&[(0, 2.0), (1, 2.0)], Relation::Eq, 6.0),
            ],
        };
        let out = solve(&lp, &SimplexOptions::default()).unwrap();
        assert_relative_eq!(out.objective, 3.0, epsilon = 1e-9);
    }

    #[test]
    fn pivot_limit_reports_trace() {
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![-1.0, -1.0],
            rows: vec![
                row(&[(0, 1.0)], Relation::Le, 1.0),
                row(&[(1, 1.0)], Relation::Le, 1.0),
            ],
        };
        let opts = SimplexOptions {
            max_pivots: 1,
            ..Default::default()
        };
        match solve(&lp, &opts) {
            Err(Error::Numerical {
                trace, iterations, ..
            }) => {
                assert_eq!(iterations, 1);
                assert_eq!(trace.len(), 1);
            }
            other => panic!("expected numerical failure, got {other:?}"),
        }
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Classic degenerate instance that cycles under pure Dantzig pricing.
        let lp = LinearProgram {
            num_vars: 4,
            objective: vec![-0.75, 20.0, -0.5, 6.0],
            rows: vec![
                row(
                    &[(0, 0.25), (1, -8.0), (2, -1.0), (3, 9.0)],
                    Relation::Le,
                    0.0,
                ),
                row(
                    &[(0, 0.5), (1, -12.0), (2, -0.5), (3, 3.0)],
                    Relation::Le,
                    0.0,
                ),
                row(&[(2, 1.0)], Relation::Le, 1.0),
            ],
        };
        let opts = SimplexOptions {
            degenerate_limit: 2,
            ..Default::default()
        };
        let out = solve(&lp, &opts).unwrap();
        assert_relative_eq!(out.objective, -1.25, epsilon = 1e-9);
    }
}
