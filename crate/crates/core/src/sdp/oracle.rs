// SPDX-License-Identifier: Apache-2.0

//! Brute-force bracket of the exact area optimum, independent of the barrier
//! solver.
//!
//! For fixed row heights the cheapest column widths are explicit,
//! `c_j(r) = max(max_i F_ij / r_i, max_i sqrt(eta F_ij))`, and they only
//! shrink as any `r_i` grows. Over a box `[lo, hi]` of row heights the
//! objective is therefore at least `max(sum lo, sum_j c_j(hi))`, while any
//! single point gives an achievable value. A logarithmic lattice of boxes
//! yields the first bracket; boxes whose lower bound exceeds the best point
//! are discarded and the rest are bisected until the bracket is narrow.

use crate::error::{Error, Result};
use crate::model::{AreaMatrix, FloorplanProblem};

/// Largest `l * k` the oracle accepts.
pub const ORACLE_MAX_TILES: usize = 6;

const MAX_LIVE_BOXES: usize = 400_000;
const MAX_ROUNDS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lower - slack && x <= self.upper + slack
    }
}

struct Instance {
    areas: AreaMatrix,
    eta: f64,
    lower_r: Vec<f64>,
    lower_c: Vec<f64>,
}

impl Instance {
    fn new(areas: AreaMatrix, eta: f64) -> Self {
        let lower_r = (0..areas.rows())
            .map(|i| (eta * areas.row_max(i)).sqrt())
            .collect();
        let lower_c = (0..areas.cols())
            .map(|j| (eta * areas.col_max(j)).sqrt())
            .collect();
        Self {
            areas,
            eta,
            lower_r,
            lower_c,
        }
    }

    fn width_sum(&self, r: &[f64]) -> f64 {
        (0..self.areas.cols())
            .map(|j| {
                (0..self.areas.rows())
                    .map(|i| {
                        let f = self.areas.get(i, j);
                        if f > 0.0 {
                            f / r[i]
                        } else {
                            0.0
                        }
                    })
                    .fold(self.lower_c[j], f64::max)
            })
            .sum()
    }

    fn value(&self, r: &[f64]) -> f64 {
        r.iter().sum::<f64>().max(self.width_sum(r))
    }

    fn box_bound(&self, lo: &[f64], hi: &[f64]) -> f64 {
        lo.iter().sum::<f64>().max(self.width_sum(hi))
    }
}

#[derive(Clone)]
struct Cell {
    lo: Vec<f64>,
    hi: Vec<f64>,
    bound: f64,
}

/// Lattice points for one row height: its lower bound, then `steps - 1`
/// log-spaced points up to `top`.
fn axis(lower: f64, top: f64, steps: usize) -> Vec<f64> {
    let first = if lower > 0.0 { lower } else { top * 1e-6 };
    let mut pts = Vec::with_capacity(steps + 1);
    if lower <= 0.0 {
        pts.push(0.0);
    }
    let n = steps.max(2);
    let ratio = (top / first).ln();
    for s in 0..n {
        pts.push(first * (ratio * s as f64 / (n - 1) as f64).exp());
    }
    pts.dedup();
    pts
}

/// Brackets the optimal side length of the exact model by exhaustive box
/// search. Only for desk-sized instances (`l k <= 6`).
pub fn sdp_reference_oracle(p: &FloorplanProblem, grid_steps: usize) -> Result<Bracket> {
    let f = p.areas();
    if f.rows() * f.cols() > ORACLE_MAX_TILES {
        return Err(Error::invalid(format!(
            "oracle handles at most {ORACLE_MAX_TILES} tiles, got {}x{}",
            f.rows(),
            f.cols()
        )));
    }
    if grid_steps < 2 {
        return Err(Error::invalid("oracle needs at least 2 grid steps"));
    }
    // Search over the shorter side; the optimum is transpose-invariant.
    let areas = if f.rows() > f.cols() {
        f.transpose()
    } else {
        f.clone()
    };
    let inst = Instance::new(areas, p.eta());
    let l = inst.areas.rows();

    if inst.areas.total() == 0.0 {
        return Ok(Bracket {
            lower: 0.0,
            upper: 0.0,
        });
    }

    // Any point with r_i >= its bound is feasible; r_i = max(bound, sqrt(F/eta))
    // gives an upper bound on the optimum, hence on every r_i.
    let seed: Vec<f64> = (0..l)
        .map(|i| inst.lower_r[i].max((inst.areas.row_max(i) / inst.eta).sqrt()))
        .collect();
    let mut upper = inst.value(&seed);
    let top = upper;

    let axes: Vec<Vec<f64>> = (0..l)
        .map(|i| axis(inst.lower_r[i], top, grid_steps))
        .collect();

    let mut cells = Vec::new();
    let mut index = vec![0usize; l];
    'lattice: loop {
        let lo: Vec<f64> = (0..l).map(|i| axes[i][index[i]]).collect();
        let hi: Vec<f64> = (0..l)
            .map(|i| {
                axes[i]
                    .get(index[i] + 1)
                    .copied()
                    .unwrap_or(axes[i][index[i]])
            })
            .collect();
        if lo.iter().all(|v| *v > 0.0) {
            upper = upper.min(inst.value(&lo));
        }
        upper = upper.min(inst.value(&hi));
        let bound = inst.box_bound(&lo, &hi);
        cells.push(Cell { lo, hi, bound });

        for d in 0..l {
            index[d] += 1;
            if index[d] + 1 < axes[d].len() {
                continue 'lattice;
            }
            index[d] = 0;
        }
        break;
    }

    let target = 1e-6 * upper.max(1.0);
    let mut lower = cells.iter().map(|c| c.bound).fold(f64::INFINITY, f64::min);
    for _ in 0..MAX_ROUNDS {
        if upper - lower <= target {
            break;
        }
        cells.retain(|c| c.bound <= upper);
        if cells.len() * (1 << l) > MAX_LIVE_BOXES {
            break;
        }
        let mut next = Vec::with_capacity(cells.len() << l);
        for cell in &cells {
            let mid: Vec<f64> = cell
                .lo
                .iter()
                .zip(&cell.hi)
                .map(|(a, b)| 0.5 * (a + b))
                .collect();
            for corner in 0..(1usize << l) {
                let (lo, hi): (Vec<f64>, Vec<f64>) = (0..l)
                    .map(|d| {
                        if corner >> d & 1 == 0 {
                            (cell.lo[d], mid[d])
                        } else {
                            (mid[d], cell.hi[d])
                        }
                    })
                    .unzip();
                upper = upper.min(inst.value(&hi));
                let bound = inst.box_bound(&lo, &hi);
                next.push(Cell { lo, hi, bound });
            }
        }
        cells = next;
        lower = cells.iter().map(|c| c.bound).fold(f64::INFINITY, f64::min);
    }

    Ok(Bracket {
        lower: lower.min(upper),
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AreaMatrix;

    fn bracket(rows: &[&[f64]], eta: f64, steps: usize) -> Bracket {
        let p = FloorplanProblem::new(AreaMatrix::from_rows(rows).unwrap(), eta).unwrap();
        sdp_reference_oracle(&p, steps).unwrap()
    }

    #[test]
    fn one_by_two_contains_sqrt2() {
        let b = bracket(&[&[1.0, 1.0]], 0.1, 200);
        assert!(b.contains(std::f64::consts::SQRT_2, 0.0), "{b:?}");
        assert!(b.width() < 1e-2);
    }

    #[test]
    fn single_tile_contains_two() {
        let b = bracket(&[&[4.0]], 0.1, 50);
        assert!(b.contains(2.0, 0.0), "{b:?}");
    }

    #[test]
    fn transposed_input_gives_same_bracket() {
        let a = bracket(&[&[1.0, 2.0, 3.0]], 0.2, 100);
        let b = bracket(&[&[1.0], &[2.0], &[3.0]], 0.2, 100);
        assert!((a.upper - b.upper).abs() < 1e-9);
    }

    #[test]
    fn rejects_large_instances() {
        let p = FloorplanProblem::new(AreaMatrix::filled(3, 3, 1.0).unwrap(), 0.1).unwrap();
        assert!(sdp_reference_oracle(&p, 10).is_err());
    }

    #[test]
    fn zero_row_is_free() {
        let b = bracket(&[&[0.0, 0.0], &[1.0, 1.0]], 0.1, 100);
        assert!(b.contains(std::f64::consts::SQRT_2, 1e-9), "{b:?}");
    }
}
