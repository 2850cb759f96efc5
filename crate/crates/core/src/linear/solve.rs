// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::model::{LpModel, MilpModel};
use super::simplex::{self, LinearProgram, LpOutcome, Relation, Row, SimplexOptions};
use crate::error::{Error, Result};
use crate::model::{FloorplanSolution, ModelKind, SolverStats};

pub const DEFAULT_LP_TOL: f64 = 1e-9;
pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;

fn to_solution(
    rows: usize,
    cols: usize,
    out: &LpOutcome,
    iterations: usize,
    start: Instant,
    kind: ModelKind,
) -> FloorplanSolution {
    let r = out.x[..rows].to_vec();
    let c = out.x[rows..rows + cols].to_vec();
    let x = out.x[rows + cols];
    FloorplanSolution {
        r,
        c,
        x,
        objective_value: out.objective,
        solver_stats: SolverStats {
            iterations,
            runtime_seconds: start.elapsed().as_secs_f64(),
            model_kind: kind,
        },
    }
}

fn simplex_options(tol: f64) -> SimplexOptions {
    SimplexOptions {
        tol,
        ..SimplexOptions::default()
    }
}

/// Solves the single-chord model to an optimal vertex.
pub fn solve_lp(m: &LpModel, tol: f64) -> Result<FloorplanSolution> {
    let start = Instant::now();
    let out = simplex::solve(&m.program, &simplex_options(tol))?;
    Ok(to_solution(
        m.areas.rows(),
        m.areas.cols(),
        &out,
        out.pivots,
        start,
        ModelKind::Lp,
    ))
}

#[derive(Clone, Copy, Debug)]
pub struct MilpOptions {
    /// Relative optimality tolerance used for pruning, also passed to the
    /// node LPs.
    pub tol: f64,
    pub node_limit: usize,
    /// Adds every segment's chord and the outer knot bounds of each tile as
    /// plain rows. The union of a tile's segment regions is the convex set
    /// above its spline, so these rows are valid and usually close the
    /// relaxation at the root. Without them every node uses the bare big-M
    /// relaxation.
    pub envelope_cuts: bool,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_LP_TOL,
            node_limit: DEFAULT_NODE_LIMIT,
            envelope_cuts: true,
        }
    }
}

struct Node {
    bound: f64,
    seq: u64,
    /// Chosen segment per selector group, `None` while free.
    fixed: Vec<Option<usize>>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // Max-heap: the smallest bound, then the oldest node, pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn envelope_rows(m: &MilpModel) -> Vec<Row> {
    let rows = m.areas.rows();
    let mut out = Vec::new();
    for group in &m.groups {
        let (i, j) = group.tile;
        for s in 0..group.segments() {
            let (a, b, d) = group.chord(s);
            out.push(Row::new(vec![(i, a), (rows + j, b)], Relation::Ge, d));
        }
        let first = group.knots[0].0;
        let last = group.knots[group.segments()].1;
        out.push(Row::new(vec![(i, 1.0)], Relation::Ge, first));
        out.push(Row::new(vec![(rows + j, 1.0)], Relation::Ge, last));
    }
    out
}

fn node_program(m: &MilpModel, base: &LinearProgram, fixed: &[Option<usize>]) -> LinearProgram {
    let mut program = base.clone();
    for (group, choice) in m.groups.iter().zip(fixed) {
        if let Some(s) = choice {
            program
                .rows
                .push(Row::new(vec![(group.vars[*s], 1.0)], Relation::Eq, 1.0));
        }
    }
    program
}

/// Global optimum of the multi-spline model by best-first branch-and-bound.
///
/// Each node solves the LP relaxation with some tiles' segments fixed. A
/// relaxation whose `(r_i, c_j)` lies inside some segment region of every
/// free tile is already integer-feasible (the selectors can be reassigned
/// without changing `r`, `c` or `x`). Otherwise the tile with the largest
/// violation is branched into one child per segment.
pub fn solve_milp(m: &MilpModel, opts: &MilpOptions) -> Result<FloorplanSolution> {
    let start = Instant::now();
    let (rows, cols) = (m.areas.rows(), m.areas.cols());
    let lp_opts = simplex_options(opts.tol);
    let mut base = m.program.clone();
    if opts.envelope_cuts {
        base.rows.extend(envelope_rows(m));
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Node {
        bound: f64::NEG_INFINITY,
        seq,
        fixed: vec![None; m.groups.len()],
    });
    let mut incumbent: Option<LpOutcome> = None;
    let mut nodes = 0usize;

    let prunable = |bound: f64, inc: &Option<LpOutcome>| {
        inc.as_ref()
            .is_some_and(|i| bound >= i.objective - opts.tol * i.objective.abs().max(1.0))
    };

    while let Some(node) = heap.pop() {
        if prunable(node.bound, &incumbent) {
            continue;
        }
        if nodes >= opts.node_limit {
            return Err(Error::NodeLimit {
                limit: opts.node_limit,
                incumbent: incumbent
                    .map(|i| Box::new(to_solution(rows, cols, &i, nodes, start, ModelKind::Milp))),
            });
        }
        nodes += 1;

        let out = match simplex::solve(&node_program(m, &base, &node.fixed), &lp_opts) {
            Ok(out) => out,
            Err(Error::Infeasible) => continue,
            Err(e) => return Err(e),
        };
        if prunable(out.objective, &incumbent) {
            continue;
        }

        let mut worst: Option<(usize, f64)> = None;
        for (g, group) in m.groups.iter().enumerate() {
            if node.fixed[g].is_some() {
                continue;
            }
            let (i, j) = group.tile;
            let (r, c) = (out.x[i], out.x[rows + j]);
            let violation = (0..group.segments())
                .map(|s| group.segment_violation(s, r, c))
                .fold(f64::INFINITY, f64::min);
            if violation > opts.tol && worst.is_none_or(|(_, v)| violation > v) {
                worst = Some((g, violation));
            }
        }

        match worst {
            None => incumbent = Some(out),
            Some((g, _)) => {
                for s in 0..m.groups[g].segments() {
                    let mut fixed = node.fixed.clone();
                    fixed[g] = Some(s);
                    seq += 1;
                    heap.push(Node {
                        bound: out.objective,
                        seq,
                        fixed,
                    });
                }
            }
        }
    }

    let best = incumbent.ok_or(Error::Infeasible)?;
    Ok(to_solution(
        rows,
        cols,
        &best,
        nodes,
        start,
        ModelKind::Milp,
    ))
}
