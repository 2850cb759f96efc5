// SPDX-License-Identifier: Apache-2.0

//! Refining the piecewise-linear approximation: more spline segments pull
//! the MILP optimum from the single-chord LP towards the exact model.

use socarea::linear::{
    build_lp, build_lp_multispline, solve_lp, solve_milp, MilpOptions, DEFAULT_LP_TOL, MAX_SEGMENTS,
};
use socarea::model::{AreaMatrix, FloorplanProblem};
use socarea::sdp::{build_sdp, solve_sdp, DEFAULT_SDP_TOL};

fn main() -> socarea::Result<()> {
    let areas = AreaMatrix::from_rows(&[[4.0, 1.0], [2.0, 9.0]])?;
    let p = FloorplanProblem::new(areas, 0.1)?;

    let lp = solve_lp(&build_lp(&p), DEFAULT_LP_TOL)?;
    println!("segments  1  x = {:.6}  (single chord)", lp.x);
    for s in 2..=MAX_SEGMENTS {
        let m = build_lp_multispline(&p, s)?;
        let sol = solve_milp(&m, &MilpOptions::default())?;
        println!(
            "segments {s:>2}  x = {:.6}  binaries {:>2}  rows {:>3}  nodes {}",
            sol.x,
            m.binary_count(),
            m.row_count(),
            sol.solver_stats.iterations
        );
    }
    let exact = solve_sdp(&build_sdp(&p), DEFAULT_SDP_TOL)?;
    println!("exact        x = {:.6}", exact.x);
    Ok(())
}
