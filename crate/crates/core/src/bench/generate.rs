// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::area_matrix_from_mapping;
use crate::model::{AreaMatrix, Core, CoreGraph, LayerShape, Mapping, TileCoord, TileGrid};

pub const BENCHMARK_IDS: [u8; 3] = [1, 2, 3];

/// Which end of the stack needs no TSV area.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LowestLayer {
    First,
    #[default]
    Last,
}

/// Area rules of a homogeneous stacked SoC.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SocSpec {
    pub layers: Vec<LayerShape>,
    pub core_area: f64,
    pub router_area_per_port: f64,
    pub tsv_area: f64,
    pub eta: f64,
    pub lowest_layer: LowestLayer,
}

impl SocSpec {
    /// Default area rules (core 10, 0.2 per router port, TSV 2, eta 0.1).
    pub fn new(layers: Vec<LayerShape>) -> Self {
        Self {
            layers,
            core_area: 10.0,
            router_area_per_port: 0.2,
            tsv_area: 2.0,
            eta: 0.1,
            lowest_layer: LowestLayer::Last,
        }
    }

    /// Index of the layer that pays no TSV area.
    pub fn tsv_free_layer(&self) -> usize {
        match self.lowest_layer {
            LowestLayer::First => 0,
            LowestLayer::Last => self.layers.len().saturating_sub(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("core_area", self.core_area),
            ("router_area_per_port", self.router_area_per_port),
            ("tsv_area", self.tsv_area),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::schema(
                    name,
                    format!("must be non-negative, got {v}"),
                ));
            }
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::schema(
                "eta",
                format!("must lie in (0, 1), got {}", self.eta),
            ));
        }
        if self.layers.is_empty() {
            return Err(Error::schema("layers", "needs at least one layer"));
        }
        for (l, s) in self.layers.iter().enumerate() {
            if s.rows == 0 || s.cols == 0 {
                return Err(Error::schema(format!("layers[{l}]"), "empty mesh"));
            }
        }
        Ok(())
    }
}

/// Router ports of a tile: one local port, one per enabled mesh neighbour,
/// one per vertical link.
pub fn port_count(grid: &TileGrid, tile: TileCoord) -> usize {
    1 + grid.mesh_neighbors(tile).count() + grid.vertical_degree(tile)
}

pub fn tile_overhead(spec: &SocSpec, grid: &TileGrid, tile: TileCoord) -> f64 {
    let router = spec.router_area_per_port * port_count(grid, tile) as f64;
    let tsv = if grid.has_vertical_link(tile) && tile.layer != spec.tsv_free_layer() {
        spec.tsv_area
    } else {
        0.0
    };
    router + tsv
}

/// Sets the overhead of every enabled tile from the spec's area rules.
pub fn apply_overheads(spec: &SocSpec, grid: &mut TileGrid) -> Result<()> {
    let tiles: Vec<TileCoord> = grid.tiles().collect();
    for t in tiles {
        let area = tile_overhead(spec, grid, t);
        grid.set_overhead(t, area)?;
    }
    Ok(())
}

/// A generated chip: the grid with overheads applied, one core per enabled
/// tile (in tile order) and the resulting per-layer area matrices.
#[derive(Clone, Debug)]
pub struct Benchmark {
    pub id: u8,
    pub spec: SocSpec,
    pub grid: TileGrid,
    pub graph: CoreGraph,
    pub mapping: Mapping,
    pub layers: Vec<AreaMatrix>,
}

impl Benchmark {
    pub fn core_count(&self) -> usize {
        self.graph.len()
    }
}

pub fn gen_benchmark(n: u8) -> Result<Benchmark> {
    let (shapes, links): (Vec<LayerShape>, Vec<TileCoord>) = match n {
        1 => (
            vec![
                LayerShape { rows: 2, cols: 2 },
                LayerShape { rows: 1, cols: 2 },
            ],
            vec![TileCoord::new(0, 0, 0), TileCoord::new(0, 0, 1)],
        ),
        2 | 3 => {
            let shape = if n == 2 {
                LayerShape { rows: 2, cols: 5 }
            } else {
                LayerShape { rows: 4, cols: 5 }
            };
            let links = (0..3)
                .flat_map(|l| {
                    (0..shape.rows)
                        .flat_map(move |r| (0..shape.cols).map(move |c| TileCoord::new(l, r, c)))
                })
                .collect();
            (vec![shape; 4], links)
        }
        _ => {
            return Err(Error::invalid(format!(
                "unknown benchmark {n}, expected one of 1, 2, 3"
            )))
        }
    };

    let spec = SocSpec::new(shapes.clone());
    let mut grid = TileGrid::new(shapes)?;
    if n == 1 {
        grid.disable(TileCoord::new(0, 1, 1))?;
    }
    for t in links {
        grid.add_vertical_link(t)?;
    }
    apply_overheads(&spec, &mut grid)?;

    let tiles: Vec<TileCoord> = grid.tiles().collect();
    let cores = (0..tiles.len())
        .map(|k| Core {
            id: k as u32,
            area: spec.core_area,
            name: Some(format!("pe{k}")),
        })
        .collect();
    let graph = CoreGraph::new(cores, Vec::new())?;
    let mapping = Mapping::from_pairs(tiles.iter().enumerate().map(|(k, t)| (k as u32, *t)))?;
    let layers = (0..grid.layer_count())
        .map(|l| area_matrix_from_mapping(&graph, &grid, &mapping, l))
        .collect::<Result<_>>()?;

    Ok(Benchmark {
        id: n,
        spec,
        grid,
        graph,
        mapping,
        layers,
    })
}

/// Published per-layer areas of one benchmark, for side-by-side reporting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PublishedLayer {
    pub lp: f64,
    pub sdp: f64,
}

/// Published per-layer LP/SDP areas and the average reduction (percent,
/// negative = smaller) of a benchmark.
pub fn published_layer_areas(n: u8) -> Option<(&'static [PublishedLayer], f64)> {
    const fn p(lp: f64, sdp: f64) -> PublishedLayer {
        PublishedLayer { lp, sdp }
    }
    const B1: [PublishedLayer; 2] = [p(43.0, 36.8), p(25.7, 23.0)];
    const B2: [PublishedLayer; 4] = [
        p(211.0, 178.0),
        p(222.0, 180.0),
        p(214.0, 183.0),
        p(185.0, 154.0),
    ];
    const B3: [PublishedLayer; 4] = [
        p(364.0, 301.0),
        p(379.0, 313.0),
        p(378.0, 313.0),
        p(316.0, 261.0),
    ];
    match n {
        1 => Some((&B1, -12.5)),
        2 => Some((&B2, -16.5)),
        3 => Some((&B3, -17.3)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ports_of_corner_and_interior_tiles() {
        let g = TileGrid::uniform(1, 2, 5).unwrap();
        assert_eq!(port_count(&g, TileCoord::new(0, 0, 0)), 3);
        assert_eq!(port_count(&g, TileCoord::new(0, 0, 2)), 4);

        let mut g = TileGrid::uniform(3, 3, 3).unwrap();
        g.add_vertical_link(TileCoord::new(0, 1, 1)).unwrap();
        g.add_vertical_link(TileCoord::new(1, 1, 1)).unwrap();
        assert_eq!(port_count(&g, TileCoord::new(1, 1, 1)), 7);
    }

    #[test]
    fn overhead_rules() {
        let spec = SocSpec::new(vec![LayerShape { rows: 2, cols: 5 }; 2]);
        let mut g = TileGrid::uniform(2, 2, 5).unwrap();
        g.add_vertical_link(TileCoord::new(0, 0, 0)).unwrap();
        // Lowest (TSV-free) layer corner with a link up.
        assert!((tile_overhead(&spec, &g, TileCoord::new(1, 0, 0)) - 0.8).abs() < 1e-12);
        // Same link pays the TSV on the upper layer.
        assert!((tile_overhead(&spec, &g, TileCoord::new(0, 0, 0)) - 2.8).abs() < 1e-12);

        let spec = SocSpec::new(vec![LayerShape { rows: 1, cols: 1 }]);
        let g = TileGrid::uniform(1, 1, 1).unwrap();
        assert!((tile_overhead(&spec, &g, TileCoord::new(0, 0, 0)) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn first_layer_can_be_tsv_free() {
        let mut spec = SocSpec::new(vec![LayerShape { rows: 1, cols: 1 }; 2]);
        spec.lowest_layer = LowestLayer::First;
        let mut g = TileGrid::uniform(2, 1, 1).unwrap();
        g.add_vertical_link(TileCoord::new(0, 0, 0)).unwrap();
        assert!((tile_overhead(&spec, &g, TileCoord::new(0, 0, 0)) - 0.4).abs() < 1e-12);
        assert!((tile_overhead(&spec, &g, TileCoord::new(1, 0, 0)) - 2.4).abs() < 1e-12);
    }

    #[test]
    fn benchmark_shapes() {
        let b1 = gen_benchmark(1).unwrap();
        assert_eq!(b1.core_count(), 5);
        assert_eq!(b1.layers[0].get(1, 1), 0.0);
        assert_eq!(b1.layers.len(), 2);

        let b2 = gen_benchmark(2).unwrap();
        assert_eq!(b2.core_count(), 40);
        let b3 = gen_benchmark(3).unwrap();
        assert_eq!(b3.core_count(), 80);
        assert_eq!((b3.layers[1].rows(), b3.layers[1].cols()), (4, 5));

        assert!(gen_benchmark(0).is_err());
        assert!(gen_benchmark(4).is_err());
    }

    #[test]
    fn spec_validation() {
        let mut spec = SocSpec::new(vec![LayerShape { rows: 1, cols: 1 }]);
        assert!(spec.validate().is_ok());
        spec.tsv_area = -1.0;
        assert!(matches!(spec.validate(), Err(Error::Schema { path, .. }) if path == "tsv_area"));
    }
}
