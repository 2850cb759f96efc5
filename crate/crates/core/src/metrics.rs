// SPDX-License-Identifier: Apache-2.0

//! Floorplan and communication metrics.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AreaMatrix, CoreGraph, FloorplanSolution, Mapping, TileCoord, TileGrid};

/// Builds the area matrix of one layer: mapped core area plus tile overhead.
pub fn area_matrix_from_mapping(
    graph: &CoreGraph,
    grid: &TileGrid,
    mapping: &Mapping,
    layer: usize,
) -> Result<AreaMatrix> {
    let shape = grid
        .layer_shape(layer)
        .ok_or_else(|| Error::invalid(format!("layer {layer} does not exist")))?;
    let mut data = vec![0.0; shape.rows * shape.cols];
    for r in 0..shape.rows {
        for c in 0..shape.cols {
            data[r * shape.cols + c] = grid.overhead(TileCoord::new(layer, r, c));
        }
    }
    for (core, tile) in mapping.iter() {
        if !grid.is_enabled(tile) {
            return Err(Error::invalid(format!(
                "core {core} is mapped to nonexistent tile {tile}"
            )));
        }
        if tile.layer != layer {
            continue;
        }
        let area = graph
            .core(core)
            .ok_or_else(|| Error::invalid(format!("mapping references unknown core {core}")))?
            .area;
        data[tile.row * shape.cols + tile.col] += area;
    }
    AreaMatrix::new(shape.rows, shape.cols, data)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingMetrics {
    /// `max(sum r, sum c)`, the side of the enclosing square.
    pub side: f64,
    /// `(sum r) * (sum c)`.
    pub bounding_area: f64,
    pub content: f64,
    pub whitespace: f64,
    pub whitespace_ratio: f64,
}

pub fn bounding_metrics(sol: &FloorplanSolution, areas: &AreaMatrix) -> Result<BoundingMetrics> {
    if sol.r.len() != areas.rows() || sol.c.len() != areas.cols() {
        return Err(Error::DimensionMismatch(format!(
            "solution is {}x{} but the area matrix is {}x{}",
            sol.r.len(),
            sol.c.len(),
            areas.rows(),
            areas.cols()
        )));
    }
    let height: f64 = sol.r.iter().sum();
    let width: f64 = sol.c.iter().sum();
    let bounding_area = height * width;
    let content = areas.total();
    let whitespace = bounding_area - content;
    Ok(BoundingMetrics {
        side: height.max(width),
        bounding_area,
        content,
        whitespace,
        whitespace_ratio: if bounding_area > 0.0 {
            whitespace / bounding_area
        } else {
            0.0
        },
    })
}

/// Manhattan distance in the 3D mesh; a layer crossing counts as one hop.
pub fn hops(a: TileCoord, b: TileCoord) -> usize {
    a.layer.abs_diff(b.layer) + a.row.abs_diff(b.row) + a.col.abs_diff(b.col)
}

fn endpoints(mapping: &Mapping, src: u32, dst: u32) -> Result<(TileCoord, TileCoord)> {
    let tile = |id| {
        mapping
            .tile_of(id)
            .ok_or_else(|| Error::invalid(format!("edge references unmapped core {id}")))
    };
    Ok((tile(src)?, tile(dst)?))
}

/// Sum over edges of `bandwidth * hops`.
pub fn comm_cost(graph: &CoreGraph, _grid: &TileGrid, mapping: &Mapping) -> Result<f64> {
    graph.edges().iter().try_fold(0.0, |acc, e| {
        let (a, b) = endpoints(mapping, e.src, e.dst)?;
        Ok(acc + e.bandwidth * hops(a, b) as f64)
    })
}

/// Directed links traversed by dimension-order routing: columns first, then
/// rows, then layers.
pub fn route(from: TileCoord, to: TileCoord) -> Vec<(TileCoord, TileCoord)> {
    let mut links = Vec::with_capacity(hops(from, to));
    let mut at = from;
    let step = |v: usize, target: usize| if target > v { v + 1 } else { v - 1 };
    while at.col != to.col {
        let next = TileCoord {
            col: step(at.col, to.col),
            ..at
        };
        links.push((at, next));
        at = next;
    }
    while at.row != to.row {
        let next = TileCoord {
            row: step(at.row, to.row),
            ..at
        };
        links.push((at, next));
        at = next;
    }
    while at.layer != to.layer {
        let next = TileCoord {
            layer: step(at.layer, to.layer),
            ..at
        };
        links.push((at, next));
        at = next;
    }
    links
}

/// Largest per-link load when every flow follows [`route`].
pub fn max_link_load(graph: &CoreGraph, _grid: &TileGrid, mapping: &Mapping) -> Result<f64> {
    let mut load: HashMap<(TileCoord, TileCoord), f64> = HashMap::new();
    for e in graph.edges() {
        let (a, b) = endpoints(mapping, e.src, e.dst)?;
        for link in route(a, b) {
            *load.entry(link).or_insert(0.0) += e.bandwidth;
        }
    }
    Ok(load.into_values().fold(0.0, f64::max))
}
