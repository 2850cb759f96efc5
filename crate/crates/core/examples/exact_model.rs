// SPDX-License-Identifier: Apache-2.0

//! Builds the block SDP model of a small matrix, prints its constraint dump,
//! solves it and checks the result against the exhaustive reference bracket.

use socarea::model::{AreaMatrix, FloorplanProblem};
use socarea::sdp::{build_sdp, sdp_reference_oracle, solve_sdp, DEFAULT_SDP_TOL};

fn main() -> socarea::Result<()> {
    let p = FloorplanProblem::new(AreaMatrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]])?, 0.2)?;
    let m = build_sdp(&p);
    println!(
        "{} blocks, {} inequalities",
        m.block_count(),
        m.inequality_count()
    );
    print!("{}", m.dump());

    let sol = solve_sdp(&m, DEFAULT_SDP_TOL)?;
    let bracket = sdp_reference_oracle(&p, 60)?;
    println!(
        "x = {:.8} in {} barrier steps; reference bracket [{:.8}, {:.8}]",
        sol.x, sol.solver_stats.iterations, bracket.lower, bracket.upper
    );
    for (i, r) in sol.r.iter().enumerate() {
        for (j, c) in sol.c.iter().enumerate() {
            println!(
                "  tile ({i},{j}): r c - F = {:.2e}",
                r * c - p.areas().get(i, j)
            );
        }
    }
    Ok(())
}
