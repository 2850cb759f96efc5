// SPDX-License-Identifier: Apache-2.0

//! Anneals the placement of eight heterogeneous cores on a two-layer mesh,
//! trading floorplan area against communication cost.

use socarea::bench::{apply_overheads, SocSpec};
use socarea::mapper::{simulated_annealing, AreaModel, SAParams};
use socarea::metrics::comm_cost;
use socarea::model::{Core, CoreGraph, Edge, LayerShape, TileCoord, TileGrid};

fn main() -> socarea::Result<()> {
    let areas = [12.0, 3.5, 8.0, 2.0, 6.5, 4.0, 9.0, 1.5];
    let cores = areas
        .iter()
        .enumerate()
        .map(|(k, &area)| Core {
            id: k as u32,
            area,
            name: Some(format!("ip{k}")),
        })
        .collect();
    let flows = [
        (0, 1, 70.0),
        (1, 2, 40.0),
        (2, 3, 90.0),
        (3, 4, 20.0),
        (4, 5, 60.0),
        (5, 6, 30.0),
        (6, 7, 80.0),
        (7, 0, 10.0),
    ];
    let edges = flows
        .iter()
        .map(|&(src, dst, bandwidth)| Edge {
            src,
            dst,
            bandwidth,
        })
        .collect();
    let graph = CoreGraph::new(cores, edges)?;

    let shapes = vec![LayerShape { rows: 2, cols: 2 }; 2];
    let mut grid = TileGrid::new(shapes.clone())?;
    for r in 0..2 {
        for c in 0..2 {
            grid.add_vertical_link(TileCoord::new(0, r, c))?;
        }
    }
    apply_overheads(&SocSpec::new(shapes), &mut grid)?;

    let params = SAParams {
        iterations: 3_000,
        reruns: 8,
        seed: 1,
        area_model: AreaModel::Sdp,
        ..SAParams::default()
    };
    let result = simulated_annealing(&graph, &grid, &params)?;

    println!(
        "initial   area {:8.2}  comm {:8.1}",
        result.initial.area, result.initial.comm
    );
    for r in &result.reruns {
        println!(
            "rerun {:>2}  area {:8.2}  comm {:8.1}  cost {:.4}  solves {:>3}  cache hits {:>5}",
            r.rerun, r.area, r.comm, r.best_cost, r.solver_calls, r.cache_hits
        );
    }
    let a = &result.aggregate;
    println!(
        "mean      area {:8.2} +- {:.2}  comm {:8.1} +- {:.1}",
        a.area.mean, a.area.std, a.comm.mean, a.comm.std
    );
    println!(
        "best cost {:.4}, comm {}",
        result.best_cost,
        comm_cost(&graph, &grid, &result.best_mapping)?
    );
    for (core, tile) in result.best_mapping.iter() {
        println!("  ip{core} -> {tile}");
    }
    Ok(())
}
