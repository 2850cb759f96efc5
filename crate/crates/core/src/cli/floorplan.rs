// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use super::{check_output, emit, read_input, ModelArg};
use crate::error::{Error, Result};
use crate::io::load_area_matrix;
use crate::linear::{
    build_lp, build_lp_multispline, solve_lp, solve_milp, MilpOptions, DEFAULT_LP_TOL,
    DEFAULT_NODE_LIMIT,
};
use crate::metrics::{bounding_metrics, BoundingMetrics};
use crate::model::{AreaMatrix, FloorplanProblem, FloorplanSolution, ModelKind};
use crate::sdp::{build_sdp, solve_sdp, DEFAULT_SDP_TOL};
use crate::svg::render_svg;

pub const DEFAULT_ETA: f64 = 0.1;

#[derive(Clone, Debug, Args)]
pub struct FloorplanArgs {
    /// Area-matrix document (`{"areas": [[...]], "eta": ...}`).
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "sdp")]
    pub model: ModelArg,
    /// Aspect-ratio bound; overrides the document's value (default 0.1).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Solver tolerance (default 1e-9 for LP/MILP, 1e-7 for SDP).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Spline segments per tile for the MILP model.
    #[arg(long, default_value_t = 4)]
    pub segments: usize,
    /// Branch-and-bound node budget for the MILP model.
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    pub node_limit: usize,
    /// Write an SVG drawing of the floorplan.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Output file for the JSON report (stdout when omitted).
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloorplanReport {
    pub model: ModelKind,
    pub eta: f64,
    pub areas: AreaMatrix,
    pub solution: FloorplanSolution,
    pub metrics: BoundingMetrics,
    /// Inequality count under the conventional counting of each model.
    pub inequality_count: usize,
    pub variable_count: usize,
}

/// Accepted solver tolerances; outside this range the solvers either stall
/// on roundoff or return meaningless optima.
pub const TOL_RANGE: std::ops::RangeInclusive<f64> = 1e-14..=1e-2;

/// Builds and solves one model. `segments` and `node_limit` only apply to
/// the MILP model.
pub fn solve_floorplan(
    p: &FloorplanProblem,
    model: ModelKind,
    tol: Option<f64>,
    segments: usize,
    node_limit: usize,
) -> Result<FloorplanReport> {
    if let Some(t) = tol.filter(|t| !TOL_RANGE.contains(t)) {
        return Err(Error::invalid(format!(
            "tolerance must lie in [{:e}, {:e}], got {t:e}",
            TOL_RANGE.start(),
            TOL_RANGE.end()
        )));
    }
    let (solution, inequality_count, variable_count) = match model {
        ModelKind::Lp => {
            let m = build_lp(p);
            let s = solve_lp(&m, tol.unwrap_or(DEFAULT_LP_TOL))?;
            (s, m.inequality_count(), m.variable_count())
        }
        ModelKind::Milp => {
            let m = build_lp_multispline(p, segments)?;
            let opts = MilpOptions {
                tol: tol.unwrap_or(DEFAULT_LP_TOL),
                node_limit,
                ..Default::default()
            };
            let s = solve_milp(&m, &opts)?;
            let counted = m.row_count();
            (s, counted, m.variable_count())
        }
        ModelKind::Sdp => {
            let m = build_sdp(p);
            let s = solve_sdp(&m, tol.unwrap_or(DEFAULT_SDP_TOL))?;
            (s, m.inequality_count(), m.variable_count())
        }
    };
    Ok(FloorplanReport {
        model,
        eta: p.eta(),
        areas: p.areas().clone(),
        metrics: bounding_metrics(&solution, p.areas())?,
        solution,
        inequality_count,
        variable_count,
    })
}

pub fn run_floorplan(args: &FloorplanArgs) -> Result<FloorplanReport> {
    for out in args.svg.iter().chain(&args.json) {
        check_output(out)?;
    }
    let doc = load_area_matrix(&read_input(&args.input)?)?;
    let eta = args.eta.or(doc.eta).unwrap_or(DEFAULT_ETA);
    let p = FloorplanProblem::new(doc.areas, eta)?;
    let report = solve_floorplan(
        &p,
        args.model.into(),
        args.tol,
        args.segments,
        args.node_limit,
    )?;

    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    emit(args.json.as_ref(), &json)?;
    if let Some(path) = &args.svg {
        std::fs::write(path, render_svg(&report.solution, &report.areas, eta)?)?;
    }
    Ok(report)
}
