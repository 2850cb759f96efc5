// SPDX-License-Identifier: Apache-2.0

//! Draws the LP and SDP floorplans of the same matrix as SVG files.
//!
//! ```text
//! cargo run --example render_svg -- /tmp/plans
//! ```

use std::path::PathBuf;

use socarea::linear::{build_lp, solve_lp, DEFAULT_LP_TOL};
use socarea::model::{AreaMatrix, FloorplanProblem};
use socarea::sdp::{build_sdp, solve_sdp, DEFAULT_SDP_TOL};
use socarea::svg::render_svg;

fn main() -> socarea::Result<()> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;

    let eta = 0.1;
    let areas = AreaMatrix::from_rows(&[[6.0, 1.0, 2.0], [1.0, 0.0, 3.0]])?;
    let p = FloorplanProblem::new(areas.clone(), eta)?;
    let lp = solve_lp(&build_lp(&p), DEFAULT_LP_TOL)?;
    let sdp = solve_sdp(&build_sdp(&p), DEFAULT_SDP_TOL)?;

    for (name, sol) in [("lp", &lp), ("sdp", &sdp)] {
        let path = dir.join(format!("floorplan-{name}.svg"));
        std::fs::write(&path, render_svg(sol, &areas, eta)?)?;
        println!("{name}: side {:.3} -> {}", sol.x, path.display());
    }
    Ok(())
}
