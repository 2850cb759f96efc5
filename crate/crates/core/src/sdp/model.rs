// SPDX-License-Identifier: Apache-2.0

//! The semidefinite area model in block form.
//!
//! Tile `(i, j)` owns the symmetric block
//! `X_m = [[r_i, sqrt F_ij], [sqrt F_ij, c_j]]`, `m = k i + j` (0-based), and
//! every linear constraint is a Frobenius inner product against one or more
//! blocks. A block with non-negative diagonal is PSD exactly when
//! `r_i c_j >= F_ij`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::model::{AreaMatrix, FloorplanProblem};

pub type Mat2 = [[f64; 2]; 2];

pub const UPPER_LEFT: Mat2 = [[1.0, 0.0], [0.0, 0.0]];
pub const LOWER_RIGHT: Mat2 = [[0.0, 0.0], [0.0, 1.0]];
pub const OFF_DIAGONAL: Mat2 = [[0.0, 1.0], [1.0, 0.0]];

fn neg(a: Mat2) -> Mat2 {
    [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpRowKind {
    OffDiagonal,
    RowCoupling,
    ColumnCoupling,
    Objective,
    Aspect,
}

/// `<coef, X_block>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrobeniusTerm {
    pub block: usize,
    pub coef: Mat2,
}

/// `lower <= sum <A, X_m> + x_coef * x <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpRow {
    pub kind: SdpRowKind,
    pub terms: Vec<FrobeniusTerm>,
    pub x_coef: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpModel {
    pub(crate) areas: AreaMatrix,
    pub(crate) eta: f64,
    rows: Vec<SdpRow>,
}

impl SdpModel {
    pub fn areas(&self) -> &AreaMatrix {
        &self.areas
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn block_count(&self) -> usize {
        self.areas.rows() * self.areas.cols()
    }

    /// Block index of tile `(i, j)`.
    pub fn block(&self, i: usize, j: usize) -> usize {
        i * self.areas.cols() + j
    }

    /// Fixed off-diagonal entry `sqrt F_ij` of a block.
    pub fn off_diagonal(&self, block: usize) -> f64 {
        self.areas.as_slice()[block].sqrt()
    }

    pub fn rows(&self) -> &[SdpRow] {
        &self.rows
    }

    /// Conventional inequality count `(kl)^2 + k + l + 2`.
    pub fn inequality_count(&self) -> usize {
        let (l, k) = (self.areas.rows(), self.areas.cols());
        (k * l).pow(2) + k + l + 2
    }

    /// Conventional variable count `2kl + k + l + 1`.
    pub fn variable_count(&self) -> usize {
        let (l, k) = (self.areas.rows(), self.areas.cols());
        2 * k * l + k + l + 1
    }

    /// Variable count stated alongside the inequality count, `kl + 1`
    /// (one matrix per block plus `x`).
    pub fn variable_count_blocks(&self) -> usize {
        self.block_count() + 1
    }

    /// Reconstructs `X_m` for given row heights and column widths.
    pub fn block_matrix(&self, block: usize, r: &[f64], c: &[f64]) -> Mat2 {
        let k = self.areas.cols();
        let s = self.off_diagonal(block);
        [[r[block / k], s], [s, c[block % k]]]
    }

    /// Evaluates `sum <A, X_m> + x_coef x` for a row.
    pub fn row_value(&self, row: &SdpRow, r: &[f64], c: &[f64], x: f64) -> f64 {
        let inner: f64 = row
            .terms
            .iter()
            .map(|t| {
                let xm = self.block_matrix(t.block, r, c);
                (0..2)
                    .flat_map(|a| (0..2).map(move |b| (a, b)))
                    .map(|(a, b)| t.coef[a][b] * xm[a][b])
                    .sum::<f64>()
            })
            .sum();
        inner + row.x_coef * x
    }

    /// Renders the model in block notation, one row per line.
    pub fn dump(&self) -> String {
        let mut out = String::from("minimize x\n");
        for row in &self.rows {
            let body: Vec<String> = row
                .terms
                .iter()
                .map(|t| format!("<{}, X{}>", fmt_mat(t.coef), t.block + 1))
                .chain((row.x_coef != 0.0).then(|| format!("{} x", row.x_coef)))
                .collect();
            let body = body.join(" + ");
            let line = match (row.lower, row.upper) {
                (Some(lo), Some(hi)) => format!("{lo} <= {body} <= {hi}"),
                (Some(lo), None) => format!("{lo} <= {body}"),
                (None, Some(hi)) => format!("{body} <= {hi}"),
                (None, None) => body,
            };
            let _ = writeln!(out, "{:<16}{line}", format!("{:?}:", row.kind));
        }
        for m in 0..self.block_count() {
            let _ = writeln!(out, "psd:            X{} >= 0", m + 1);
        }
        out
    }
}

fn fmt_mat(a: Mat2) -> String {
    format!("[[{},{}],[{},{}]]", a[0][0], a[0][1], a[1][0], a[1][1])
}

/// Builds the block model: fixed off-diagonals, row and column coupling of
/// the diagonal entries, the two objective rows and the per-tile aspect
/// bounds `r_i >= sqrt(eta F_ij)`, `c_j >= sqrt(eta F_ij)`.
pub fn build_sdp(p: &FloorplanProblem) -> SdpModel {
    let f = p.areas();
    let eta = p.eta();
    let (l, k) = (f.rows(), f.cols());
    let block = |i: usize, j: usize| i * k + j;
    let mut rows = Vec::new();

    for (i, j, area) in f.iter() {
        let v = 2.0 * area.sqrt();
        rows.push(SdpRow {
            kind: SdpRowKind::OffDiagonal,
            terms: vec![FrobeniusTerm {
                block: block(i, j),
                coef: OFF_DIAGONAL,
            }],
            x_coef: 0.0,
            lower: Some(v),
            upper: Some(v),
        });
    }
    for i in 0..l {
        for j in 0..k {
            rows.push(SdpRow {
                kind: SdpRowKind::RowCoupling,
                terms: vec![
                    FrobeniusTerm {
                        block: block(i, 0),
                        coef: UPPER_LEFT,
                    },
                    FrobeniusTerm {
                        block: block(i, j),
                        coef: neg(UPPER_LEFT),
                    },
                ],
                x_coef: 0.0,
                lower: Some(0.0),
                upper: Some(0.0),
            });
        }
    }
    for j in 0..k {
        for i in 0..l {
            rows.push(SdpRow {
                kind: SdpRowKind::ColumnCoupling,
                terms: vec![
                    FrobeniusTerm {
                        block: block(0, j),
                        coef: LOWER_RIGHT,
                    },
                    FrobeniusTerm {
                        block: block(i, j),
                        coef: neg(LOWER_RIGHT),
                    },
                ],
                x_coef: 0.0,
                lower: Some(0.0),
                upper: Some(0.0),
            });
        }
    }
    rows.push(SdpRow {
        kind: SdpRowKind::Objective,
        terms: (0..l)
            .map(|i| FrobeniusTerm {
                block: block(i, 0),
                coef: neg(UPPER_LEFT),
            })
            .collect(),
        x_coef: 1.0,
        lower: Some(0.0),
        upper: None,
    });
    rows.push(SdpRow {
        kind: SdpRowKind::Objective,
        terms: (0..k)
            .map(|j| FrobeniusTerm {
                block: block(0, j),
                coef: neg(LOWER_RIGHT),
            })
            .collect(),
        x_coef: 1.0,
        lower: Some(0.0),
        upper: None,
    });
    for (i, j, area) in f.iter() {
        let bound = (eta * area).sqrt();
        rows.push(SdpRow {
            kind: SdpRowKind::Aspect,
            terms: vec![FrobeniusTerm {
                block: block(i, 0),
                coef: UPPER_LEFT,
            }],
            x_coef: 0.0,
            lower: Some(bound),
            upper: None,
        });
        rows.push(SdpRow {
            kind: SdpRowKind::Aspect,
            terms: vec![FrobeniusTerm {
                block: block(0, j),
                coef: LOWER_RIGHT,
            }],
            x_coef: 0.0,
            lower: Some(bound),
            upper: None,
        });
    }

    SdpModel {
        areas: f.clone(),
        eta,
        rows,
    }
}
