// SPDX-License-Identifier: Apache-2.0

//! Hop distances, communication cost and worst link load under
//! dimension-order routing.

use socarea::metrics::{comm_cost, hops, max_link_load, route};
use socarea::model::{Core, CoreGraph, Edge, Mapping, TileCoord, TileGrid};

fn main() -> socarea::Result<()> {
    let grid = TileGrid::uniform(2, 3, 3)?;
    let cores = (0..4)
        .map(|id| Core {
            id,
            area: 1.0,
            name: None,
        })
        .collect();
    let edges = vec![
        Edge {
            src: 0,
            dst: 1,
            bandwidth: 10.0,
        },
        Edge {
            src: 2,
            dst: 1,
            bandwidth: 5.0,
        },
        Edge {
            src: 3,
            dst: 0,
            bandwidth: 2.0,
        },
    ];
    let graph = CoreGraph::new(cores, edges)?;
    let mapping = Mapping::from_pairs([
        (0, TileCoord::new(0, 0, 0)),
        (1, TileCoord::new(0, 2, 2)),
        (2, TileCoord::new(0, 0, 1)),
        (3, TileCoord::new(1, 1, 1)),
    ])?;

    for e in graph.edges() {
        let (a, b) = (
            mapping.tile_of(e.src).unwrap(),
            mapping.tile_of(e.dst).unwrap(),
        );
        let path: Vec<String> = route(a, b).iter().map(|(_, to)| to.to_string()).collect();
        println!(
            "{} -> {}: {} hops via {}",
            e.src,
            e.dst,
            hops(a, b),
            path.join(" ")
        );
    }
    println!("comm cost     {}", comm_cost(&graph, &grid, &mapping)?);
    println!("max link load {}", max_link_load(&graph, &grid, &mapping)?);
    Ok(())
}
