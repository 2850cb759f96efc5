// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use super::{check_output, emit, read_input, AreaModelArg};
use crate::error::{Error, Result};
use crate::io::{load_coregraph, load_grid, load_reference, ReferenceEntry};
use crate::mapper::{simulated_annealing, write_trace, SAParams, SAResult};
use crate::report::RatioColumns;

#[derive(Clone, Debug, Args)]
pub struct MapArgs {
    /// Core-graph document.
    pub coregraph: PathBuf,
    /// Tile-grid document.
    pub grid: PathBuf,
    #[arg(long, default_value_t = 15_000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 20)]
    pub reruns: usize,
    #[arg(long = "t0", default_value_t = 30.0)]
    pub initial_temperature: f64,
    #[arg(long, default_value_t = 0.98)]
    pub cooling: f64,
    /// Iterations between two coolings.
    #[arg(long, default_value_t = 100)]
    pub cooling_period: usize,
    #[arg(long, default_value_t = 0.5)]
    pub w_area: f64,
    #[arg(long, default_value_t = 0.5)]
    pub w_comm: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "sdp")]
    pub model: AreaModelArg,
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    /// Solve every layer on every iteration instead of memoising.
    #[arg(long)]
    pub no_cache: bool,
    /// Output file for the JSON result (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-iteration trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Reference table for ratio columns.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Entry of the reference table to compare against; optional when the
    /// table has a single entry.
    #[arg(long)]
    pub benchmark: Option<String>,
}

impl MapArgs {
    pub fn params(&self) -> SAParams {
        SAParams {
            initial_temperature: self.initial_temperature,
            cooling_factor: self.cooling,
            cooling_period: self.cooling_period,
            iterations: self.iterations,
            reruns: self.reruns,
            w_area: self.w_area,
            w_comm: self.w_comm,
            seed: self.seed,
            area_model: self.model.into(),
            eta: self.eta,
            cache: !self.no_cache,
            trace: self.trace.is_some(),
        }
    }
}

/// Ratios of the initial solution and of the rerun means against a
/// reference entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub reference: ReferenceEntry,
    pub initial: RatioColumns,
    pub sa_mean: RatioColumns,
    /// `[area, comm, bandwidth]` of `sa_mean` as printed percentages.
    pub sa_mean_formatted: [String; 3],
    pub initial_formatted: [String; 3],
}

impl RatioReport {
    pub fn new(result: &SAResult, reference: &ReferenceEntry) -> Self {
        let i = &result.initial;
        let a = &result.aggregate;
        let initial = RatioColumns::against(i.area, i.comm, i.max_link_load, reference);
        let sa_mean =
            RatioColumns::against(a.area.mean, a.comm.mean, a.max_link_load.mean, reference);
        Self {
            reference: reference.clone(),
            initial_formatted: initial.formatted(),
            sa_mean_formatted: sa_mean.formatted(),
            initial,
            sa_mean,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapReport {
    #[serde(flatten)]
    pub result: SAResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<RatioReport>,
}

fn pick_reference(args: &MapArgs) -> Result<Option<ReferenceEntry>> {
    let Some(path) = &args.reference else {
        return Ok(None);
    };
    let table = load_reference(&read_input(path)?)?;
    let entry = match &args.benchmark {
        Some(name) => table
            .get(name)
            .cloned()
            .ok_or_else(|| Error::invalid(format!("reference table has no benchmark {name:?}")))?,
        None if table.benchmarks.len() == 1 => table.benchmarks[0].clone(),
        None => {
            return Err(Error::invalid(
                "reference table has several benchmarks; pick one with --benchmark",
            ))
        }
    };
    Ok(Some(entry))
}

pub fn run_map(args: &MapArgs) -> Result<MapReport> {
    for out in args.out.iter().chain(&args.trace) {
        check_output(out)?;
    }
    let graph = load_coregraph(&read_input(&args.coregraph)?)?;
    let grid = load_grid(&read_input(&args.grid)?)?;
    let reference = pick_reference(args)?;
    let params = args.params();
    params.validate()?;

    let result = simulated_annealing(&graph, &grid, &params)?;
    for f in &result.failures {
        eprintln!("warning: rerun {} failed: {}", f.rerun, f.message);
    }
    if let Some(path) = &args.trace {
        write_trace(&result.trace, std::fs::File::create(path)?)?;
    }
    let ratios = reference.as_ref().map(|r| RatioReport::new(&result, r));
    let report = MapReport { result, ratios };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    emit(args.out.as_ref(), &json)?;
    Ok(report)
}
