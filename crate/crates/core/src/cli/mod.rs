// SPDX-License-Identifier: Apache-2.0

//! Command-line surface: `floorplan`, `map`, `bench` and `validate`.
//!
//! Every command is also callable as a library function returning its
//! report, so tests and examples do not need to spawn the binary.

mod bench;
mod floorplan;
mod map;
mod validate;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::mapper::AreaModel;
use crate::model::ModelKind;

pub use bench::{
    bench_table, run_bench, BenchArgs, BenchReport, BenchmarkRow, LayerRow, ModelCounts,
    ReportFormat, Suite,
};
pub use floorplan::{run_floorplan, solve_floorplan, FloorplanArgs, FloorplanReport, TOL_RANGE};
pub use map::{run_map, MapArgs, MapReport, RatioReport};
pub use validate::{run_validate, ValidateArgs};

/// Environment variable holding the worker-pool size.
pub const WORKERS_ENV: &str = "SOCAREA_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "socarea",
    version,
    about = "Area-aware SoC floorplanning and core mapping"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one area matrix with the LP, MILP or SDP model.
    Floorplan(FloorplanArgs),
    /// Anneal a core-to-tile mapping.
    Map(MapArgs),
    /// Run the LP-vs-SDP comparison on the synthetic benchmarks.
    Bench(BenchArgs),
    /// Check a JSON document against its schema and invariants.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Lp,
    Milp,
    Sdp,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Lp => ModelKind::Lp,
            ModelArg::Milp => ModelKind::Milp,
            ModelArg::Sdp => ModelKind::Sdp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AreaModelArg {
    Lp,
    Sdp,
}

impl From<AreaModelArg> for AreaModel {
    fn from(m: AreaModelArg) -> Self {
        match m {
            AreaModelArg::Lp => AreaModel::Lp,
            AreaModelArg::Sdp => AreaModel::Sdp,
        }
    }
}

/// Exit code for an error: 3 for solver failures, 2 for everything the
/// caller can fix in the input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible
        | Error::Unbounded
        | Error::Numerical { .. }
        | Error::NonConvergence { .. }
        | Error::NodeLimit { .. }
        | Error::Layer { .. } => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

/// Fails early if `path` cannot be created because its directory is missing.
pub(crate) fn check_output(path: &Path) -> crate::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    match dir {
        Some(d) if !d.is_dir() => Err(Error::invalid(format!(
            "output directory {} does not exist",
            d.display()
        ))),
        _ => Ok(()),
    }
}

pub(crate) fn read_input(path: &Path) -> crate::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub(crate) fn emit(path: Option<&PathBuf>, text: &str) -> crate::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Floorplan(a) => run_floorplan(a).map(drop),
        Command::Map(a) => run_map(a).map(drop),
        Command::Bench(a) => run_bench(a).map(drop),
        Command::Validate(a) => run_validate(a).map(drop),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Sizes the global rayon pool from [`WORKERS_ENV`], if set.
pub fn init_workers() -> crate::Result<()> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| {
            Error::invalid(format!(
                "{WORKERS_ENV} must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::invalid(format!("cannot size the worker pool: {e}")))
}

/// Parses `args` (including the program name) and runs them.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    }
}
