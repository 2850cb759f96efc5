// SPDX-License-Identifier: Apache-2.0

//! Linearised area models.
//!
//! Variables are laid out as `r_1..r_l, c_1..c_k, x` followed, for the
//! multi-spline model, by one block of segment selectors per occupied tile.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::simplex::{LinearProgram, Relation, Row};
use crate::error::{Error, Result};
use crate::model::{AreaMatrix, FloorplanProblem};

/// Largest segment count accepted by [`build_lp_multispline`].
pub const MAX_SEGMENTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    /// `r_i >= eta c_j` or `c_j >= eta r_i`.
    Aspect,
    /// Single chord `r_i + c_j >= sqrt(F eta) + sqrt(F / eta)`.
    Chord,
    /// `x >= sum r` or `x >= sum c`.
    Objective,
    /// Big-M chord of one spline segment.
    SegmentChord,
    /// Big-M lower bound on `r_i` or `c_j` for one spline segment.
    SegmentBound,
    /// Exactly one selector per tile.
    Selector,
}

/// Column bookkeeping shared by both linear models.
#[derive(Clone, Debug, PartialEq)]
struct Layout {
    l: usize,
    k: usize,
}

impl Layout {
    fn r(&self, i: usize) -> usize {
        i
    }
    fn c(&self, j: usize) -> usize {
        self.l + j
    }
    fn x(&self) -> usize {
        self.l + self.k
    }
    fn base_vars(&self) -> usize {
        self.l + self.k + 1
    }
}

/// The single-chord linear model for a fixed mapping.
#[derive(Clone, Debug, PartialEq)]
pub struct LpModel {
    pub(crate) areas: AreaMatrix,
    pub(crate) eta: f64,
    pub(crate) program: LinearProgram,
    pub(crate) kinds: Vec<RowKind>,
    pub(crate) names: Vec<String>,
}

impl LpModel {
    pub fn areas(&self) -> &AreaMatrix {
        &self.areas
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn program(&self) -> &LinearProgram {
        &self.program
    }

    pub fn row_kinds(&self) -> &[RowKind] {
        &self.kinds
    }

    /// `l + k + 1`.
    pub fn variable_count(&self) -> usize {
        self.program.num_vars
    }

    /// Inequality count as conventionally reported: the aspect pairs plus the
    /// two objective rows, `2lk + 2`. Chord rows are not included.
    pub fn inequality_count(&self) -> usize {
        self.kinds
            .iter()
            .filter(|k| matches!(k, RowKind::Aspect | RowKind::Objective))
            .count()
    }

    /// Every row of the model, `3lk + 2`.
    pub fn row_count(&self) -> usize {
        self.program.rows.len()
    }

    pub fn dump(&self) -> String {
        dump_rows(&self.program, &self.kinds, &self.names)
    }
}

/// One segment-selector block of the multi-spline model.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectorGroup {
    pub tile: (usize, usize),
    /// Column indices of the binaries, one per segment.
    pub vars: Vec<usize>,
    /// `S + 1` points `(r, c)` on `r c = F`, ordered by increasing `r`.
    pub knots: Vec<(f64, f64)>,
    pub big_m: f64,
}

impl SelectorGroup {
    /// Chord through knots `s` and `s + 1` as `(a, b, d)` with `a r + b c >= d`,
    /// scaled so that `max(a, b) = 1`.
    pub fn chord(&self, s: usize) -> (f64, f64, f64) {
        let (r0, c0) = self.knots[s];
        let (r1, c1) = self.knots[s + 1];
        let (a, b) = (c0 - c1, r1 - r0);
        let norm = a.max(b);
        let (a, b) = (a / norm, b / norm);
        (a, b, a * r0 + b * c0)
    }

    /// Largest scaled violation of segment `s`'s rows at `(r, c)`; zero or
    /// negative means the point lies in that segment's region.
    pub fn segment_violation(&self, s: usize, r: f64, c: f64) -> f64 {
        let (a, b, d) = self.chord(s);
        let scale = d.max(1.0);
        let chord = (d - a * r - b * c) / scale;
        let lower_r = (self.knots[s].0 - r) / scale;
        let lower_c = (self.knots[s + 1].1 - c) / scale;
        chord.max(lower_r).max(lower_c)
    }

    pub fn segments(&self) -> usize {
        self.vars.len()
    }
}

/// The single-chord model with the chord of every occupied tile replaced by
/// `S` big-M activated spline segments.
#[derive(Clone, Debug, PartialEq)]
pub struct MilpModel {
    pub(crate) areas: AreaMatrix,
    pub(crate) eta: f64,
    pub(crate) program: LinearProgram,
    pub(crate) kinds: Vec<RowKind>,
    pub(crate) names: Vec<String>,
    pub(crate) groups: Vec<SelectorGroup>,
    pub(crate) segments: usize,
}

impl MilpModel {
    /// Wraps a single-chord model with no integer variables.
    pub fn from_lp(lp: &LpModel) -> Self {
        Self {
            areas: lp.areas.clone(),
            eta: lp.eta,
            program: lp.program.clone(),
            kinds: lp.kinds.clone(),
            names: lp.names.clone(),
            groups: Vec::new(),
            segments: 1,
        }
    }

    pub fn areas(&self) -> &AreaMatrix {
        &self.areas
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn program(&self) -> &LinearProgram {
        &self.program
    }

    pub fn row_kinds(&self) -> &[RowKind] {
        &self.kinds
    }

    pub fn groups(&self) -> &[SelectorGroup] {
        &self.groups
    }

    pub fn segments(&self) -> usize {
        self.segments
    }

    pub fn variable_count(&self) -> usize {
        self.program.num_vars
    }

    pub fn binary_count(&self) -> usize {
        self.groups.iter().map(SelectorGroup::segments).sum()
    }

    /// Rows coupled to a selector binary (segment chords and bounds).
    pub fn integer_inequality_count(&self) -> usize {
        self.kinds
            .iter()
            .filter(|k| matches!(k, RowKind::SegmentChord | RowKind::SegmentBound))
            .count()
    }

    pub fn row_count(&self) -> usize {
        self.program.rows.len()
    }

    pub fn dump(&self) -> String {
        dump_rows(&self.program, &self.kinds, &self.names)
    }
}

/// Right-hand side of the single chord, `sqrt(F eta) + sqrt(F / eta)`.
pub fn chord_rhs(area: f64, eta: f64) -> f64 {
    (area * eta).sqrt() + (area / eta).sqrt()
}

fn base_names(layout: &Layout) -> Vec<String> {
    (1..=layout.l)
        .map(|i| format!("r{i}"))
        .chain((1..=layout.k).map(|j| format!("c{j}")))
        .chain(std::iter::once("x".to_string()))
        .collect()
}

fn aspect_rows(layout: &Layout, i: usize, j: usize, eta: f64) -> [Row; 2] {
    [
        Row::new(
            vec![(layout.r(i), 1.0), (layout.c(j), -eta)],
            Relation::Ge,
            0.0,
        ),
        Row::new(
            vec![(layout.c(j), 1.0), (layout.r(i), -eta)],
            Relation::Ge,
            0.0,
        ),
    ]
}

fn objective_rows(layout: &Layout) -> [Row; 2] {
    let x = layout.x();
    let sum_r = std::iter::once((x, 1.0))
        .chain((0..layout.l).map(|i| (layout.r(i), -1.0)))
        .collect();
    let sum_c = std::iter::once((x, 1.0))
        .chain((0..layout.k).map(|j| (layout.c(j), -1.0)))
        .collect();
    [
        Row::new(sum_r, Relation::Ge, 0.0),
        Row::new(sum_c, Relation::Ge, 0.0),
    ]
}

fn objective(layout: &Layout, num_vars: usize) -> Vec<f64> {
    let mut obj = vec![0.0; num_vars];
    obj[layout.x()] = 1.0;
    obj
}

/// Builds the single-chord model: for every tile the two aspect rows and the
/// chord between the aspect-line intersections of `r c = F`, plus
/// `x >= sum r` and `x >= sum c`.
pub fn build_lp(p: &FloorplanProblem) -> LpModel {
    let f = p.areas();
    let eta = p.eta();
    let layout = Layout {
        l: f.rows(),
        k: f.cols(),
    };
    let mut rows = Vec::with_capacity(3 * f.rows() * f.cols() + 2);
    let mut kinds = Vec::with_capacity(rows.capacity());
    for (i, j, area) in f.iter() {
        for row in aspect_rows(&layout, i, j, eta) {
            rows.push(row);
            kinds.push(RowKind::Aspect);
        }
        rows.push(Row::new(
            vec![(layout.r(i), 1.0), (layout.c(j), 1.0)],
            Relation::Ge,
            chord_rhs(area, eta),
        ));
        kinds.push(RowKind::Chord);
    }
    for row in objective_rows(&layout) {
        rows.push(row);
        kinds.push(RowKind::Objective);
    }
    let num_vars = layout.base_vars();
    LpModel {
        areas: f.clone(),
        eta,
        program: LinearProgram {
            num_vars,
            objective: objective(&layout, num_vars),
            rows,
        },
        kinds,
        names: base_names(&layout),
    }
}

/// `segments + 1` knots on `r c = area`, equally spaced in `r` between the
/// aspect-line intersections `(sqrt(F eta), sqrt(F / eta))` and
/// `(sqrt(F / eta), sqrt(F eta))`.
pub fn spline_knots(area: f64, eta: f64, segments: usize) -> Vec<(f64, f64)> {
    let lo = (area * eta).sqrt();
    let hi = (area / eta).sqrt();
    (0..=segments)
        .map(|s| {
            let r = if s == segments {
                hi
            } else {
                lo + (hi - lo) * s as f64 / segments as f64
            };
            let c = if s == 0 {
                hi
            } else if s == segments {
                lo
            } else {
                area / r
            };
            (r, c)
        })
        .collect()
}

/// Builds the multi-spline model with `segments` chords per occupied tile.
///
/// Selecting segment `s` of tile `(i, j)` enforces its chord together with
/// `r_i >= r_s` and `c_j >= c_{s+1}`; these three rows keep every feasible
/// point on the far side of the hyperbola. Exactly one selector per tile is
/// active.
pub fn build_lp_multispline(p: &FloorplanProblem, segments: usize) -> Result<MilpModel> {
    if segments < 2 {
        return Err(Error::invalid(format!(
            "multi-spline model needs at least 2 segments, got {segments}; use build_lp"
        )));
    }
    if segments > MAX_SEGMENTS {
        return Err(Error::invalid(format!(
            "at most {MAX_SEGMENTS} segments are supported, got {segments}"
        )));
    }
    let f = p.areas();
    let eta = p.eta();
    let layout = Layout {
        l: f.rows(),
        k: f.cols(),
    };
    let mut names = base_names(&layout);
    let mut rows = Vec::new();
    let mut kinds = Vec::new();
    let mut groups = Vec::new();
    let mut next_var = layout.base_vars();

    for (i, j, area) in f.iter() {
        for row in aspect_rows(&layout, i, j, eta) {
            rows.push(row);
            kinds.push(RowKind::Aspect);
        }
        if area <= 0.0 {
            rows.push(Row::new(
                vec![(layout.r(i), 1.0), (layout.c(j), 1.0)],
                Relation::Ge,
                0.0,
            ));
            kinds.push(RowKind::Chord);
            continue;
        }
        let group = SelectorGroup {
            tile: (i, j),
            vars: (next_var..next_var + segments).collect(),
            knots: spline_knots(area, eta, segments),
            big_m: chord_rhs(area, eta),
        };
        next_var += segments;
        let m = group.big_m;
        for s in 0..segments {
            let z = group.vars[s];
            names.push(format!("z{}_{}_{}", i + 1, j + 1, s + 1));
            let (a, b, d) = group.chord(s);
            rows.push(Row::new(
                vec![(layout.r(i), a), (layout.c(j), b), (z, -m)],
                Relation::Ge,
                d - m,
            ));
            kinds.push(RowKind::SegmentChord);
            rows.push(Row::new(
                vec![(layout.r(i), 1.0), (z, -m)],
                Relation::Ge,
                group.knots[s].0 - m,
            ));
            kinds.push(RowKind::SegmentBound);
            rows.push(Row::new(
                vec![(layout.c(j), 1.0), (z, -m)],
                Relation::Ge,
                group.knots[s + 1].1 - m,
            ));
            kinds.push(RowKind::SegmentBound);
        }
        rows.push(Row::new(
            group.vars.iter().map(|&z| (z, 1.0)).collect(),
            Relation::Eq,
            1.0,
        ));
        kinds.push(RowKind::Selector);
        groups.push(group);
    }
    for row in objective_rows(&layout) {
        rows.push(row);
        kinds.push(RowKind::Objective);
    }
    Ok(MilpModel {
        areas: f.clone(),
        eta,
        program: LinearProgram {
            num_vars: next_var,
            objective: objective(&layout, next_var),
            rows,
        },
        kinds,
        names,
        groups,
        segments,
    })
}

fn dump_rows(program: &LinearProgram, kinds: &[RowKind], names: &[String]) -> String {
    let mut out = String::new();
    let obj: Vec<String> = program
        .objective
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(j, c)| term(*c, &names[j], true))
        .collect();
    let _ = writeln!(out, "minimize {}", obj.join(" "));
    for (row, kind) in program.rows.iter().zip(kinds) {
        let lhs: Vec<String> = row
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &(j, a))| term(a, &names[j], n == 0))
            .collect();
        let _ = writeln!(
            out,
            "{:<13} {} {} {}",
            format!("{kind:?}:"),
            lhs.join(" "),
            row.relation.symbol(),
            row.rhs
        );
    }
    out
}

fn term(coef: f64, name: &str, first: bool) -> String {
    let sign = if coef < 0.0 { "-" } else { "+" };
    let mag = coef.abs();
    let body = if mag == 1.0 {
        name.to_string()
    } else {
        format!("{mag} {name}")
    };
    match (first, coef < 0.0) {
        (true, false) => body,
        _ => format!("{sign} {body}"),
    }
}
