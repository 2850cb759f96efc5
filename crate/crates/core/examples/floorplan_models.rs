// SPDX-License-Identifier: Apache-2.0

//! Solves one area matrix with all three models and compares side length,
//! bounding area and whitespace.
//!
//! ```text
//! cargo run --example floorplan_models
//! ```

use socarea::cli::solve_floorplan;
use socarea::linear::DEFAULT_NODE_LIMIT;
use socarea::model::{AreaMatrix, FloorplanProblem, ModelKind};

fn main() -> socarea::Result<()> {
    let areas =
        AreaMatrix::from_rows(&[[10.8, 10.6, 10.8], [10.6, 12.4, 10.6], [10.8, 10.6, 10.8]])?;
    let p = FloorplanProblem::new(areas, 0.1)?;

    println!(
        "{:<5} {:>9} {:>11} {:>11} {:>6} {:>5}",
        "model", "side", "bounding", "whitespace", "rows", "vars"
    );
    for model in [ModelKind::Lp, ModelKind::Milp, ModelKind::Sdp] {
        let r = solve_floorplan(&p, model, None, 4, DEFAULT_NODE_LIMIT)?;
        println!(
            "{:<5} {:>9.4} {:>11.4} {:>11.4} {:>6} {:>5}",
            format!("{model:?}"),
            r.metrics.side,
            r.metrics.bounding_area,
            r.metrics.whitespace,
            r.inequality_count,
            r.variable_count
        );
    }
    println!("content {:.4}", p.areas().total());
    Ok(())
}
