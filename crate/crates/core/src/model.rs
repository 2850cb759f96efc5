// SPDX-License-Identifier: Apache-2.0

//! Domain types shared by the area models, the mapper and the benchmark
//! generator.
//!
//! Everything here is an immutable value once constructed. Constructors
//! validate invariants and return [`Error`] on violation, so downstream code
//! can rely on them without re-checking.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute feasibility tolerance, scaled by `max(1, |value|)` where used.
pub const FEASIBILITY_TOL: f64 = 1e-7;

/// Row-major `rows x cols` matrix of required tile content areas.
///
/// A zero entry means no component sits at that position.
#[derive(Clone, Debug, PartialEq)]
pub struct AreaMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl AreaMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(format!(
                "area matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} area matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid(format!(
                "area at ({}, {}) must be finite and non-negative, got {}",
                pos / cols,
                pos % cols,
                data[pos]
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(i) = rows.iter().position(|r| r.as_ref().len() != ncols) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {ncols}",
                rows[i].as_ref().len()
            )));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::new(nrows, ncols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Iterates `(i, j, F[i][j])` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(move |(p, &v)| (p / self.cols, p % self.cols, v))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.rows,
            self.cols,
            self.data.iter().map(|v| v * factor).collect(),
        )
    }

    /// Largest entry of row `i`.
    pub fn row_max(&self, i: usize) -> f64 {
        (0..self.cols).map(|j| self.get(i, j)).fold(0.0, f64::max)
    }

    /// Largest entry of column `j`.
    pub fn col_max(&self, j: usize) -> f64 {
        (0..self.rows).map(|i| self.get(i, j)).fold(0.0, f64::max)
    }
}

impl Serialize for AreaMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AreaMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        AreaMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// An area matrix together with the aspect-ratio bound `eta` in (0, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct FloorplanProblem {
    areas: AreaMatrix,
    eta: f64,
}

impl FloorplanProblem {
    pub fn new(areas: AreaMatrix, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::invalid(format!(
                "aspect-ratio bound eta must lie in (0, 1), got {eta}"
            )));
        }
        Ok(Self { areas, eta })
    }

    pub fn areas(&self) -> &AreaMatrix {
        &self.areas
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Lp,
    Milp,
    Sdp,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Lp => "LP",
            ModelKind::Milp => "MILP",
            ModelKind::Sdp => "SDP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    /// Simplex pivots, branch-and-bound nodes or Newton steps.
    pub iterations: usize,
    pub runtime_seconds: f64,
    pub model_kind: ModelKind,
}

/// Row heights, column widths and bounding side of a floorplan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloorplanSolution {
    pub r: Vec<f64>,
    pub c: Vec<f64>,
    pub x: f64,
    pub objective_value: f64,
    pub solver_stats: SolverStats,
}

impl FloorplanSolution {
    /// Largest violation of `r_i c_j >= F_ij`, each scaled by `max(1, F_ij)`.
    /// Zero or negative means the solution covers every component.
    pub fn max_area_violation(&self, areas: &AreaMatrix) -> f64 {
        areas
            .iter()
            .map(|(i, j, f)| (f - self.r[i] * self.c[j]) / f.max(1.0))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn covers(&self, areas: &AreaMatrix, tol: f64) -> bool {
        self.r.len() == areas.rows()
            && self.c.len() == areas.cols()
            && self.max_area_violation(areas) <= tol
            && self.x >= self.r.iter().sum::<f64>() - tol * self.x.abs().max(1.0)
            && self.x >= self.c.iter().sum::<f64>() - tol * self.x.abs().max(1.0)
    }
}

/// Position of a tile in the 3D mesh. Layer 0 is the top of the stack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TileCoord {
    pub layer: usize,
    pub row: usize,
    pub col: usize,
}

impl TileCoord {
    pub const fn new(layer: usize, row: usize, col: usize) -> Self {
        Self { layer, row, col }
    }
}

impl fmt::Display for TileCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.layer, self.row, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerShape {
    pub rows: usize,
    pub cols: usize,
}

/// Mesh geometry of a (possibly 3D-stacked) chip.
///
/// Each layer is its own `rows x cols` mesh. A vertical link at
/// `(layer, row, col)` connects that tile to `(layer + 1, row, col)`.
/// Disabled positions are holes: they hold no router and cannot host a core.
#[derive(Clone, Debug, PartialEq)]
pub struct TileGrid {
    layers: Vec<LayerShape>,
    overhead: Vec<Vec<f64>>,
    vertical_links: BTreeSet<TileCoord>,
    disabled: BTreeSet<TileCoord>,
}

impl TileGrid {
    pub fn new(layers: Vec<LayerShape>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::invalid("tile grid needs at least one layer"));
        }
        if let Some(l) = layers.iter().position(|s| s.rows == 0 || s.cols == 0) {
            return Err(Error::invalid(format!("layer {l} has an empty mesh")));
        }
        let overhead = layers.iter().map(|s| vec![0.0; s.rows * s.cols]).collect();
        Ok(Self {
            layers,
            overhead,
            vertical_links: BTreeSet::new(),
            disabled: BTreeSet::new(),
        })
    }

    /// `layers` identical `rows x cols` meshes.
    pub fn uniform(layers: usize, rows: usize, cols: usize) -> Result<Self> {
        Self::new(vec![LayerShape { rows, cols }; layers])
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_shape(&self, layer: usize) -> Option<LayerShape> {
        self.layers.get(layer).copied()
    }

    pub fn layers(&self) -> &[LayerShape] {
        &self.layers
    }

    /// Whether the position exists in the mesh (enabled or not).
    pub fn contains(&self, t: TileCoord) -> bool {
        self.layers
            .get(t.layer)
            .is_some_and(|s| t.row < s.rows && t.col < s.cols)
    }

    pub fn is_enabled(&self, t: TileCoord) -> bool {
        self.contains(t) && !self.disabled.contains(&t)
    }

    fn check(&self, t: TileCoord) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::invalid(format!("tile {t} is outside the grid")))
        }
    }

    pub fn overhead(&self, t: TileCoord) -> f64 {
        let s = self.layers[t.layer];
        self.overhead[t.layer][t.row * s.cols + t.col]
    }

    pub fn set_overhead(&mut self, t: TileCoord, area: f64) -> Result<()> {
        self.check(t)?;
        if !area.is_finite() || area < 0.0 {
            return Err(Error::invalid(format!(
                "overhead of tile {t} must be finite and non-negative, got {area}"
            )));
        }
        let cols = self.layers[t.layer].cols;
        self.overhead[t.layer][t.row * cols + t.col] = area;
        Ok(())
    }

    /// Adds a link from `t` down to `(t.layer + 1, t.row, t.col)`.
    pub fn add_vertical_link(&mut self, t: TileCoord) -> Result<()> {
        self.check(t)?;
        let below = TileCoord::new(t.layer + 1, t.row, t.col);
        if !self.contains(below) {
            return Err(Error::invalid(format!(
                "vertical link at {t} has no tile below it"
            )));
        }
        self.vertical_links.insert(t);
        Ok(())
    }

    pub fn vertical_links(&self) -> &BTreeSet<TileCoord> {
        &self.vertical_links
    }

    pub fn disable(&mut self, t: TileCoord) -> Result<()> {
        self.check(t)?;
        self.disabled.insert(t);
        let cols = self.layers[t.layer].cols;
        self.overhead[t.layer][t.row * cols + t.col] = 0.0;
        Ok(())
    }

    pub fn disabled(&self) -> &BTreeSet<TileCoord> {
        &self.disabled
    }

    /// Whether the tile has a link to the layer above or below.
    pub fn has_vertical_link(&self, t: TileCoord) -> bool {
        self.vertical_degree(t) > 0
    }

    pub fn vertical_degree(&self, t: TileCoord) -> usize {
        let down = self.vertical_links.contains(&t) as usize;
        let up = (t.layer > 0
            && self
                .vertical_links
                .contains(&TileCoord::new(t.layer - 1, t.row, t.col))) as usize;
        down + up
    }

    /// Enabled tiles in layer-major, then row-major, then column order.
    pub fn tiles(&self) -> impl Iterator<Item = TileCoord> + '_ {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(l, s)| {
                (0..s.rows).flat_map(move |r| (0..s.cols).map(move |c| TileCoord::new(l, r, c)))
            })
            .filter(|t| !self.disabled.contains(t))
    }

    pub fn tile_count(&self) -> usize {
        self.tiles().count()
    }

    /// Enabled in-layer mesh neighbours of `t`.
    pub fn mesh_neighbors(&self, t: TileCoord) -> impl Iterator<Item = TileCoord> + '_ {
        let s = self.layers[t.layer];
        let mut out = Vec::with_capacity(4);
        if t.row > 0 {
            out.push(TileCoord::new(t.layer, t.row - 1, t.col));
        }
        if t.row + 1 < s.rows {
            out.push(TileCoord::new(t.layer, t.row + 1, t.col));
        }
        if t.col > 0 {
            out.push(TileCoord::new(t.layer, t.row, t.col - 1));
        }
        if t.col + 1 < s.cols {
            out.push(TileCoord::new(t.layer, t.row, t.col + 1));
        }
        out.into_iter().filter(|n| self.is_enabled(*n))
    }
}

pub type CoreId = u32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Core {
    pub id: CoreId,
    pub area: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub src: CoreId,
    pub dst: CoreId,
    pub bandwidth: f64,
}

/// Cores with areas and directed communication demands.
#[derive(Clone, Debug, PartialEq)]
pub struct CoreGraph {
    cores: Vec<Core>,
    edges: Vec<Edge>,
    index: BTreeMap<CoreId, usize>,
}

impl CoreGraph {
    pub fn new(cores: Vec<Core>, edges: Vec<Edge>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (k, core) in cores.iter().enumerate() {
            if !core.area.is_finite() || core.area < 0.0 {
                return Err(Error::schema(
                    format!("cores[{k}].area"),
                    format!("must be finite and non-negative, got {}", core.area),
                ));
            }
            if index.insert(core.id, k).is_some() {
                return Err(Error::schema(
                    format!("cores[{k}].id"),
                    format!("duplicate core id {}", core.id),
                ));
            }
        }
        for (k, e) in edges.iter().enumerate() {
            for (field, id) in [("src", e.src), ("dst", e.dst)] {
                if !index.contains_key(&id) {
                    return Err(Error::schema(
                        format!("edges[{k}].{field}"),
                        format!("references unknown core {id}"),
                    ));
                }
            }
            if e.src == e.dst {
                return Err(Error::schema(
                    format!("edges[{k}]"),
                    format!("self-loop on core {}", e.src),
                ));
            }
            if !e.bandwidth.is_finite() || e.bandwidth < 0.0 {
                return Err(Error::schema(
                    format!("edges[{k}].bandwidth"),
                    format!("must be finite and non-negative, got {}", e.bandwidth),
                ));
            }
        }
        Ok(Self {
            cores,
            edges,
            index,
        })
    }

    pub fn cores(&self) -> &[Core] {
        &self.cores
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn core(&self, id: CoreId) -> Option<&Core> {
        self.index.get(&id).map(|&k| &self.cores[k])
    }

    /// Position of the core in [`CoreGraph::cores`].
    pub fn position(&self, id: CoreId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.cores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cores.is_empty()
    }
}

/// Injective assignment of cores to tiles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mapping {
    assignment: BTreeMap<CoreId, TileCoord>,
}

impl Mapping {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a mapping, rejecting two cores on one tile.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (CoreId, TileCoord)>) -> Result<Self> {
        let mut m = Self::new();
        for (core, tile) in pairs {
            m.place(core, tile)?;
        }
        Ok(m)
    }

    /// Places `core` on `tile`, moving it if already placed.
    pub fn place(&mut self, core: CoreId, tile: TileCoord) -> Result<()> {
        if let Some(other) = self.core_at(tile) {
            if other != core {
                return Err(Error::invalid(format!(
                    "tile {tile} already holds core {other}"
                )));
            }
        }
        self.assignment.insert(core, tile);
        Ok(())
    }

    pub fn tile_of(&self, core: CoreId) -> Option<TileCoord> {
        self.assignment.get(&core).copied()
    }

    pub fn core_at(&self, tile: TileCoord) -> Option<CoreId> {
        self.assignment
            .iter()
            .find_map(|(&c, &t)| (t == tile).then_some(c))
    }

    pub fn iter(&self) -> impl Iterator<Item = (CoreId, TileCoord)> + '_ {
        self.assignment.iter().map(|(&c, &t)| (c, t))
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Swaps the tiles of two placed cores.
    pub fn swap(&mut self, a: CoreId, b: CoreId) -> Result<()> {
        let ta = self
            .tile_of(a)
            .ok_or_else(|| Error::invalid(format!("core {a} is unmapped")))?;
        let tb = self
            .tile_of(b)
            .ok_or_else(|| Error::invalid(format!("core {b} is unmapped")))?;
        self.assignment.insert(a, tb);
        self.assignment.insert(b, ta);
        Ok(())
    }

    /// Checks that every mapped tile is an enabled grid tile, every mapped
    /// core exists, and (when `total`) that every core of `graph` is mapped.
    pub fn validate(&self, graph: &CoreGraph, grid: &TileGrid, total: bool) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (core, tile) in self.iter() {
            if graph.core(core).is_none() {
                return Err(Error::invalid(format!(
                    "mapping references unknown core {core}"
                )));
            }
            if !grid.is_enabled(tile) {
                return Err(Error::invalid(format!(
                    "core {core} is mapped to nonexistent or disabled tile {tile}"
                )));
            }
            if !seen.insert(tile) {
                return Err(Error::invalid(format!("tile {tile} holds two cores")));
            }
        }
        if total {
            if let Some(c) = graph.cores().iter().find(|c| self.tile_of(c.id).is_none()) {
                return Err(Error::invalid(format!("core {} is unmapped", c.id)));
            }
        }
        Ok(())
    }
}
