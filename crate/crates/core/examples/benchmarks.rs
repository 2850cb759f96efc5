// SPDX-License-Identifier: Apache-2.0

//! Generates the three homogeneous stacked benchmarks and compares LP and
//! SDP floorplans layer by layer, next to the published areas.
//!
//! ```text
//! cargo run --release --example benchmarks
//! ```

use socarea::bench::{gen_benchmark, BENCHMARK_IDS};
use socarea::cli::bench_table;

fn main() -> socarea::Result<()> {
    for id in BENCHMARK_IDS {
        let b = gen_benchmark(id)?;
        println!(
            "benchmark {id}: {} cores on {} layers",
            b.core_count(),
            b.layers.len()
        );
        for (l, f) in b.layers.iter().enumerate() {
            println!("  layer {} areas {:?}", l + 1, f.to_rows());
        }
    }
    println!();

    let report = bench_table(5)?;
    for row in &report.benchmarks {
        println!(
            "benchmark {}  LP {}/{}  SDP {} rows  avg change {:+.1}% (published {:+.1}%)",
            row.id,
            row.lp_counts.inequalities,
            row.lp_counts.variables,
            row.sdp_counts.inequalities,
            100.0 * row.average_reduction.unwrap_or(f64::NAN),
            100.0 * row.published_average_reduction.unwrap_or(f64::NAN)
        );
        for l in &row.layers {
            println!(
                "  layer {}  LP {:>8.2} ({:>5})  SDP {:>8.2} ({:>5})  whitespace {:>7.2} -> {:>5.2}",
                l.layer,
                l.lp_area.unwrap_or(f64::NAN),
                l.published_lp.map_or("-".into(), |v| format!("{v}")),
                l.sdp_area.unwrap_or(f64::NAN),
                l.published_sdp.map_or("-".into(), |v| format!("{v}")),
                l.lp_whitespace.unwrap_or(f64::NAN),
                l.sdp_whitespace.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
