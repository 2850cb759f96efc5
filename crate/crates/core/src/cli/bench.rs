// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::{check_output, emit};
use crate::bench::{gen_benchmark, published_layer_areas, Benchmark, BENCHMARK_IDS};
use crate::error::{Error, Result};
use crate::io::{save_area_matrix, save_coregraph, save_grid, save_mapping, AreaDocument};
use crate::linear::{build_lp, solve_lp, DEFAULT_LP_TOL};
use crate::metrics::bounding_metrics;
use crate::model::FloorplanProblem;
use crate::sdp::{build_sdp, solve_sdp, DEFAULT_SDP_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Table1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "table1")]
    pub suite: Suite,
    /// Repetitions per benchmark and model for runtime averaging.
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    /// Report file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report format; guessed from the `--out` extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
    /// Also write every benchmark's grid, cores, mapping and area matrices
    /// into this directory.
    #[arg(long)]
    pub emit_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerRow {
    pub layer: usize,
    /// Bounding areas `(sum r)(sum c)`; `None` if the solver failed.
    pub lp_area: Option<f64>,
    pub sdp_area: Option<f64>,
    /// `(sdp - lp) / lp`.
    pub delta: Option<f64>,
    pub lp_whitespace: Option<f64>,
    pub sdp_whitespace: Option<f64>,
    pub content: f64,
    pub published_lp: Option<f64>,
    pub published_sdp: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelCounts {
    pub inequalities: usize,
    pub variables: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub id: u8,
    pub cores: usize,
    pub layers: Vec<LayerRow>,
    /// Mean of the per-layer deltas.
    pub average_reduction: Option<f64>,
    pub published_average_reduction: Option<f64>,
    pub lp_runtime_seconds: f64,
    pub sdp_runtime_seconds: f64,
    pub lp_counts: ModelCounts,
    pub sdp_counts: ModelCounts,
    /// Variables counted as one matrix per block plus `x`.
    pub sdp_block_variables: usize,
    /// SDP area strictly below LP area in every layer.
    pub dominance: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub reps: usize,
    pub benchmarks: Vec<BenchmarkRow>,
}

fn timed<T>(reps: usize, mut f: impl FnMut() -> Result<T>) -> (Result<T>, f64) {
    let mut last = None;
    let mut total = 0.0;
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        let out = f();
        total += t.elapsed().as_secs_f64();
        let failed = out.is_err();
        last = Some(out);
        if failed {
            break;
        }
    }
    (
        last.expect("at least one repetition"),
        total / reps.max(1) as f64,
    )
}

fn per_layer<T>(
    all: Result<Vec<T>>,
    problems: &[FloorplanProblem],
    solve: impl Fn(&FloorplanProblem) -> Result<T>,
    name: &str,
    failures: &mut Vec<String>,
) -> Vec<Option<T>> {
    match all {
        Ok(v) => v.into_iter().map(Some).collect(),
        Err(_) => problems
            .iter()
            .enumerate()
            .map(|(l, p)| match solve(p) {
                Ok(s) => Some(s),
                Err(e) => {
                    failures.push(format!("{name} layer {}: {e}", l + 1));
                    None
                }
            })
            .collect(),
    }
}

fn run_one(b: &Benchmark, reps: usize) -> BenchmarkRow {
    let eta = b.spec.eta;
    let problems: Vec<FloorplanProblem> = b
        .layers
        .iter()
        .map(|f| FloorplanProblem::new(f.clone(), eta).expect("generated eta is valid"))
        .collect();
    let published = published_layer_areas(b.id);
    let mut failures = Vec::new();

    let (lp, lp_runtime) = timed(reps, || {
        problems
            .iter()
            .map(|p| solve_lp(&build_lp(p), DEFAULT_LP_TOL))
            .collect::<Result<Vec<_>>>()
    });
    let (sdp, sdp_runtime) = timed(reps, || {
        problems
            .iter()
            .map(|p| solve_sdp(&build_sdp(p), DEFAULT_SDP_TOL))
            .collect::<Result<Vec<_>>>()
    });
    // Timing stops at the first failure; re-solve per layer so one bad
    // layer only blanks its own cell.
    let lp = per_layer(
        lp,
        &problems,
        |p| solve_lp(&build_lp(p), DEFAULT_LP_TOL),
        "LP",
        &mut failures,
    );
    let sdp = per_layer(
        sdp,
        &problems,
        |p| solve_sdp(&build_sdp(p), DEFAULT_SDP_TOL),
        "SDP",
        &mut failures,
    );

    let mut layers = Vec::new();
    for (l, p) in problems.iter().enumerate() {
        let f = p.areas();
        let lm = lp[l].as_ref().and_then(|s| bounding_metrics(s, f).ok());
        let sm = sdp[l].as_ref().and_then(|s| bounding_metrics(s, f).ok());
        let pub_layer = published.and_then(|(rows, _)| rows.get(l));
        layers.push(LayerRow {
            layer: l + 1,
            lp_area: lm.map(|m| m.bounding_area),
            sdp_area: sm.map(|m| m.bounding_area),
            delta: lm
                .zip(sm)
                .map(|(a, b)| (b.bounding_area - a.bounding_area) / a.bounding_area),
            lp_whitespace: lm.map(|m| m.whitespace),
            sdp_whitespace: sm.map(|m| m.whitespace),
            content: f.total(),
            published_lp: pub_layer.map(|p| p.lp),
            published_sdp: pub_layer.map(|p| p.sdp),
        });
    }
    let deltas: Vec<f64> = layers.iter().filter_map(|r| r.delta).collect();
    let average_reduction = (deltas.len() == layers.len() && !deltas.is_empty())
        .then(|| deltas.iter().sum::<f64>() / deltas.len() as f64);
    let dominance = layers
        .iter()
        .all(|r| matches!((r.lp_area, r.sdp_area), (Some(a), Some(b)) if b < a));
    if !dominance {
        failures.push("SDP area is not below LP area in every layer".to_string());
    }

    let (mut lp_counts, mut sdp_counts) = (
        ModelCounts {
            inequalities: 0,
            variables: 0,
        },
        ModelCounts {
            inequalities: 0,
            variables: 0,
        },
    );
    let mut sdp_block_variables = 0;
    for p in &problems {
        let m = build_lp(p);
        lp_counts.inequalities += m.inequality_count();
        lp_counts.variables += m.variable_count();
        let s = build_sdp(p);
        sdp_counts.inequalities += s.inequality_count();
        sdp_counts.variables += s.variable_count();
        sdp_block_variables += s.variable_count_blocks();
    }

    BenchmarkRow {
        id: b.id,
        cores: b.core_count(),
        layers,
        average_reduction,
        published_average_reduction: published.map(|(_, avg)| avg / 100.0),
        lp_runtime_seconds: lp_runtime,
        sdp_runtime_seconds: sdp_runtime,
        lp_counts,
        sdp_counts,
        sdp_block_variables,
        dominance,
        failures,
    }
}

fn emit_benchmark(dir: &std::path::Path, b: &Benchmark) -> Result<()> {
    let stem = format!("bench{}", b.id);
    std::fs::write(dir.join(format!("{stem}.grid.json")), save_grid(&b.grid))?;
    std::fs::write(
        dir.join(format!("{stem}.coregraph.json")),
        save_coregraph(&b.graph),
    )?;
    std::fs::write(
        dir.join(format!("{stem}.mapping.json")),
        save_mapping(&b.mapping),
    )?;
    for (l, f) in b.layers.iter().enumerate() {
        let doc = AreaDocument {
            areas: f.clone(),
            eta: Some(b.spec.eta),
        };
        std::fs::write(
            dir.join(format!("{stem}.layer{}.areas.json", l + 1)),
            save_area_matrix(&doc),
        )?;
    }
    Ok(())
}

/// Runs the three synthetic benchmarks through both models.
pub fn bench_table(reps: usize) -> Result<BenchReport> {
    let benchmarks = BENCHMARK_IDS
        .iter()
        .map(|&n| gen_benchmark(n).map(|b| run_one(&b, reps)))
        .collect::<Result<_>>()?;
    Ok(BenchReport { reps, benchmarks })
}

fn cell(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "failed".to_string(), |v| format!("{v:.digits$}"))
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{:+.1}%", 100.0 * v))
}

impl BenchReport {
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# LP vs SDP area, synthetic 3D SoCs\n");
        let _ = writeln!(
            s,
            "Areas are bounding areas (sum r)(sum c) per layer; runtimes average {} repetitions.\n",
            self.reps
        );
        for b in &self.benchmarks {
            let _ = writeln!(s, "## Benchmark {} ({} PEs)\n", b.id, b.cores);
            let _ = writeln!(s, "| Layer | LP | SDP | Δ | Content | LP whitespace | SDP whitespace | Published LP | Published SDP |");
            let _ = writeln!(s, "|---|---|---|---|---|---|---|---|---|");
            for r in &b.layers {
                let flag = match (r.lp_area, r.sdp_area) {
                    (Some(a), Some(b)) if b < a => "",
                    _ => " (!)",
                };
                let _ = writeln!(
                    s,
                    "| {} | {} | {}{flag} | {} | {:.2} | {} | {} | {} | {} |",
                    r.layer,
                    cell(r.lp_area, 2),
                    cell(r.sdp_area, 2),
                    pct(r.delta),
                    r.content,
                    cell(r.lp_whitespace, 2),
                    cell(r.sdp_whitespace, 2),
                    r.published_lp.map_or("-".into(), |v| format!("{v}")),
                    r.published_sdp.map_or("-".into(), |v| format!("{v}")),
                );
            }
            let _ = writeln!(s);
            let _ = writeln!(s, "| | LP | SDP |");
            let _ = writeln!(s, "|---|---|---|");
            let _ = writeln!(
                s,
                "| Average area reduction | | {} (published {}) |",
                pct(b.average_reduction),
                pct(b.published_average_reduction)
            );
            let _ = writeln!(
                s,
                "| Runtime [s] | {:.6} | {:.6} |",
                b.lp_runtime_seconds, b.sdp_runtime_seconds
            );
            let _ = writeln!(
                s,
                "| Inequality count | {} | {} |",
                b.lp_counts.inequalities, b.sdp_counts.inequalities
            );
            let _ = writeln!(
                s,
                "| Variable count | {} | {} ({} as blocks) |",
                b.lp_counts.variables, b.sdp_counts.variables, b.sdp_block_variables
            );
            for f in &b.failures {
                let _ = writeln!(s, "\n**warning:** {f}");
            }
            let _ = writeln!(s);
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "benchmark,layer,lp_area,sdp_area,delta,content,lp_whitespace,sdp_whitespace,published_lp,published_sdp,lp_runtime_s,sdp_runtime_s,lp_inequalities,lp_variables,sdp_inequalities,sdp_variables\n",
        );
        let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
        for b in &self.benchmarks {
            for r in &b.layers {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    b.id,
                    r.layer,
                    opt(r.lp_area),
                    opt(r.sdp_area),
                    opt(r.delta),
                    r.content,
                    opt(r.lp_whitespace),
                    opt(r.sdp_whitespace),
                    opt(r.published_lp),
                    opt(r.published_sdp),
                    b.lp_runtime_seconds,
                    b.sdp_runtime_seconds,
                    b.lp_counts.inequalities,
                    b.lp_counts.variables,
                    b.sdp_counts.inequalities,
                    b.sdp_counts.variables,
                );
            }
        }
        s
    }
}

pub fn run_bench(args: &BenchArgs) -> Result<BenchReport> {
    let Suite::Table1 = args.suite;
    if let Some(out) = &args.out {
        check_output(out)?;
    }
    if let Some(dir) = &args.emit_dir {
        if !dir.is_dir() {
            return Err(Error::invalid(format!(
                "{} is not a directory",
                dir.display()
            )));
        }
    }
    if args.reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    if let Some(dir) = &args.emit_dir {
        for &n in &BENCHMARK_IDS {
            emit_benchmark(dir, &gen_benchmark(n)?)?;
        }
    }
    let report = bench_table(args.reps)?;
    let format = args.format.unwrap_or_else(|| {
        match args
            .out
            .as_ref()
            .and_then(|p| p.extension())
            .and_then(|e| e.to_str())
        {
            Some("csv") => ReportFormat::Csv,
            Some("json") => ReportFormat::Json,
            _ => ReportFormat::Markdown,
        }
    });
    let text = match format {
        ReportFormat::Markdown => report.to_markdown(),
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Json => {
            let mut j = serde_json::to_string_pretty(&report).expect("report serializes");
            j.push('\n');
            j
        }
    };
    emit(args.out.as_ref(), &text)?;
    for b in &report.benchmarks {
        for f in &b.failures {
            eprintln!("warning: benchmark {}: {f}", b.id);
        }
    }
    Ok(report)
}
