// SPDX-License-Identifier: Apache-2.0

//! Log-barrier path following for the block model.
//!
//! With the off-diagonal entries fixed, `-log det X_m = -log(r_i c_j - F_ij)`
//! is the PSD-cone barrier of block `m`, so the solver works directly on the
//! variables `(r, c, x)`:
//!
//! ```text
//! minimize  t x - sum_m log(r_i c_j - F_ij) - sum_i log(r_i - a_i)
//!               - sum_j log(c_j - b_j) - log(x - sum r) - log(x - sum c)
//! ```
//!
//! where `a_i = max_j sqrt(eta F_ij)` and `b_j = max_i sqrt(eta F_ij)`
//! aggregate the aspect bounds. Blocks with `F_ij = 0` are dropped: their
//! determinant condition `r_i c_j >= 0` is implied by the bounds. Each block
//! contributes barrier parameter 2 and each linear row 1, so a centred point
//! at weight `t` is within `nu / t` of the optimum.

// Domain checks are written `!(d > 0.0)` so that NaN counts as outside.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::time::Instant;

use super::model::SdpModel;
use crate::error::{Error, Result};
use crate::model::{FloorplanSolution, ModelKind, SolverStats};

pub const DEFAULT_SDP_TOL: f64 = 1e-7;

const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug)]
pub struct BarrierOptions {
    /// Relative duality-gap target.
    pub tol: f64,
    pub initial_t: f64,
    pub t_growth: f64,
    /// Centring stops once half the squared Newton decrement drops below this.
    pub newton_tol: f64,
    pub max_newton_steps: usize,
    pub backtrack: f64,
    pub sufficient_decrease: f64,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_SDP_TOL,
            initial_t: 1.0,
            t_growth: 10.0,
            newton_tol: 1e-10,
            max_newton_steps: 500,
            backtrack: 0.5,
            sufficient_decrease: 1e-4,
        }
    }
}

impl BarrierOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

struct Reduced {
    l: usize,
    k: usize,
    /// `(i, j, F_ij)` for every block with positive area.
    blocks: Vec<(usize, usize, f64)>,
    lower_r: Vec<f64>,
    lower_c: Vec<f64>,
}

impl Reduced {
    fn from_model(m: &SdpModel) -> Self {
        let f = m.areas();
        let eta = m.eta();
        let (l, k) = (f.rows(), f.cols());
        let mut lower_r = vec![0.0; l];
        let mut lower_c = vec![0.0; k];
        let mut blocks = Vec::new();
        for (i, j, area) in f.iter() {
            if area > 0.0 {
                blocks.push((i, j, area));
                let b = (eta * area).sqrt();
                lower_r[i] = f64::max(lower_r[i], b);
                lower_c[j] = f64::max(lower_c[j], b);
            }
        }
        Self {
            l,
            k,
            blocks,
            lower_r,
            lower_c,
        }
    }

    fn n(&self) -> usize {
        self.l + self.k + 1
    }

    fn nu(&self) -> f64 {
        (2 * self.blocks.len() + self.l + self.k + 2) as f64
    }

    /// Strictly feasible starting point.
    fn start(&self, eta: f64) -> Vec<f64> {
        let mut v = vec![1.0f64; self.n()];
        for &(i, j, area) in &self.blocks {
            let s = (area / eta).sqrt() + 1.0;
            v[i] = v[i].max(s);
            v[self.l + j] = v[self.l + j].max(s);
        }
        for (vi, lo) in v[..self.l].iter_mut().zip(&self.lower_r) {
            *vi = vi.max(lo + 1.0);
        }
        for (vj, lo) in v[self.l..self.l + self.k].iter_mut().zip(&self.lower_c) {
            *vj = vj.max(lo + 1.0);
        }
        let sum_r: f64 = v[..self.l].iter().sum();
        let sum_c: f64 = v[self.l..self.l + self.k].iter().sum();
        v[self.l + self.k] = sum_r.max(sum_c) + 1.0;
        v
    }

    /// Barrier value `t x + phi(v)`, or `None` outside the domain.
    fn value(&self, v: &[f64], t: f64) -> Option<f64> {
        let (l, k) = (self.l, self.k);
        let x = v[l + k];
        let mut phi = 0.0;
        for &(i, j, area) in &self.blocks {
            let s = v[i] * v[l + j] - area;
            if !(s > 0.0) {
                return None;
            }
            phi -= s.ln();
        }
        for (vi, lo) in v[..l].iter().zip(&self.lower_r) {
            let d = vi - lo;
            if !(d > 0.0) {
                return None;
            }
            phi -= d.ln();
        }
        for j in 0..k {
            let d = v[l + j] - self.lower_c[j];
            if !(d > 0.0) {
                return None;
            }
            phi -= d.ln();
        }
        let er = x - v[..l].iter().sum::<f64>();
        let ec = x - v[l..l + k].iter().sum::<f64>();
        if !(er > 0.0 && ec > 0.0) {
            return None;
        }
        phi -= er.ln() + ec.ln();
        Some(t * x + phi)
    }

    /// Gradient and dense Hessian of the barrier objective at `v`.
    fn derivatives(&self, v: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
        let (l, k, n) = (self.l, self.k, self.n());
        let xi = l + k;
        let mut g = vec![0.0; n];
        let mut h = vec![0.0; n * n];
        g[xi] = t;

        for &(i, j, area) in &self.blocks {
            let (r, c) = (v[i], v[l + j]);
            let s = r * c - area;
            let s2 = s * s;
            let cj = l + j;
            g[i] -= c / s;
            g[cj] -= r / s;
            h[i * n + i] += c * c / s2;
            h[cj * n + cj] += r * r / s2;
            h[i * n + cj] += area / s2;
            h[cj * n + i] += area / s2;
        }
        for i in 0..l {
            let d = v[i] - self.lower_r[i];
            g[i] -= 1.0 / d;
            h[i * n + i] += 1.0 / (d * d);
        }
        for j in 0..k {
            let d = v[l + j] - self.lower_c[j];
            g[l + j] -= 1.0 / d;
            h[(l + j) * n + l + j] += 1.0 / (d * d);
        }
        // -log(x - sum over `range`): gradient a / e with a = (-1 on range, +1 on x).
        for range in [0..l, l..l + k] {
            let e = v[xi] - v[range.clone()].iter().sum::<f64>();
            let w = 1.0 / (e * e);
            g[xi] -= 1.0 / e;
            for p in range.clone() {
                g[p] += 1.0 / e;
            }
            let idx: Vec<(usize, f64)> = range
                .map(|p| (p, -1.0))
                .chain(std::iter::once((xi, 1.0)))
                .collect();
            for &(p, ap) in &idx {
                for &(q, aq) in &idx {
                    h[p * n + q] += w * ap * aq;
                }
            }
        }
        (g, h)
    }
}

/// Solves `h d = -g` by Cholesky factorisation. `None` if `h` is not
/// numerically positive definite.
fn newton_direction(h: &[f64], g: &[f64]) -> Option<Vec<f64>> {
    let n = g.len();
    let mut lower = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = h[i * n + j];
            for p in 0..j {
                sum -= lower[i * n + p] * lower[j * n + p];
            }
            if i == j {
                if !(sum > 0.0) {
                    return None;
                }
                lower[i * n + i] = sum.sqrt();
            } else {
                lower[i * n + j] = sum / lower[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = -g[i];
        for p in 0..i {
            sum -= lower[i * n + p] * y[p];
        }
        y[i] = sum / lower[i * n + i];
    }
    let mut d = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for p in i + 1..n {
            sum -= lower[p * n + i] * d[p];
        }
        d[i] = sum / lower[i * n + i];
    }
    Some(d)
}

fn solution(red: &Reduced, v: &[f64], steps: usize, start: Instant) -> FloorplanSolution {
    let (l, k) = (red.l, red.k);
    let r = v[..l].to_vec();
    let c = v[l..l + k].to_vec();
    // Tightening x to the larger side sum keeps the point feasible.
    let x = r.iter().sum::<f64>().max(c.iter().sum());
    FloorplanSolution {
        r,
        c,
        x,
        objective_value: x,
        solver_stats: SolverStats {
            iterations: steps,
            runtime_seconds: start.elapsed().as_secs_f64(),
            model_kind: ModelKind::Sdp,
        },
    }
}

/// Solves the block model to relative duality gap `tol`.
pub fn solve_sdp(m: &SdpModel, tol: f64) -> Result<FloorplanSolution> {
    solve_sdp_with(m, &BarrierOptions::with_tol(tol))
}

pub fn solve_sdp_with(m: &SdpModel, opts: &BarrierOptions) -> Result<FloorplanSolution> {
    let start = Instant::now();
    if !(opts.tol > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let red = Reduced::from_model(m);
    let mut v = red.start(m.eta());
    let xi = red.l + red.k;
    let nu = red.nu();
    let mut t = opts.initial_t;
    let mut steps = 0usize;

    loop {
        // Centring.
        loop {
            let (g, h) = red.derivatives(&v, t);
            let Some(d) = newton_direction(&h, &g) else {
                break;
            };
            let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
            if -slope / 2.0 <= opts.newton_tol {
                break;
            }
            if steps >= opts.max_newton_steps {
                return Err(Error::NonConvergence {
                    steps,
                    gap: nu / t,
                    best: Box::new(solution(&red, &v, steps, start)),
                });
            }
            steps += 1;

            let f0 = red.value(&v, t).expect("iterate stays strictly feasible");
            let mut alpha = 1.0;
            let mut trial = vec![0.0; v.len()];
            let accepted = loop {
                for (p, tv) in trial.iter_mut().enumerate() {
                    *tv = v[p] + alpha * d[p];
                }
                if let Some(f1) = red.value(&trial, t) {
                    if f1 <= f0 + opts.sufficient_decrease * alpha * slope {
                        break Some(f1);
                    }
                }
                alpha *= opts.backtrack;
                if alpha < 1e-20 {
                    break None;
                }
            };
            let Some(f1) = accepted else {
                break;
            };
            v.copy_from_slice(&trial);
            // Decrease at roundoff level: the point is as centred as the
            // arithmetic can tell.
            if f0 - f1 <= ROUNDOFF * f0.abs().max(1.0) {
                break;
            }
        }

        let gap = nu / t;
        if gap <= opts.tol * v[xi].abs().max(1.0) {
            return Ok(solution(&red, &v, steps, start));
        }
        t *= opts.t_growth;
    }
}
