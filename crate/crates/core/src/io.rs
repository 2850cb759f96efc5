// SPDX-License-Identifier: Apache-2.0

//! JSON documents: core graphs, tile grids, area matrices, mappings and
//! reference metric tables.
//!
//! Structural errors (wrong types, missing or unknown fields) and invariant
//! violations are both reported as [`Error::Schema`] with a JSON path such
//! as `edges[3].bandwidth`. Schemas live in the crate's `schemas/` directory.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    AreaMatrix, Core, CoreGraph, CoreId, Edge, LayerShape, Mapping, TileCoord, TileGrid,
};

fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "$".to_string() } else { path };
        Error::schema(path, e.into_inner().to_string())
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn read_text(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

// Core graphs.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoreGraphDoc {
    cores: Vec<Core>,
    #[serde(default)]
    edges: Vec<Edge>,
}

pub fn load_coregraph(text: &str) -> Result<CoreGraph> {
    let doc: CoreGraphDoc = parse(text)?;
    CoreGraph::new(doc.cores, doc.edges)
}

pub fn save_coregraph(g: &CoreGraph) -> String {
    to_json(&CoreGraphDoc {
        cores: g.cores().to_vec(),
        edges: g.edges().to_vec(),
    })
}

// Tile grids.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerDoc {
    rows: usize,
    cols: usize,
    /// `rows x cols` overhead areas; all zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    overhead: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    layers: Vec<LayerDoc>,
    #[serde(default)]
    vertical_links: Vec<TileCoord>,
    #[serde(default)]
    disabled: Vec<TileCoord>,
}

pub fn load_grid(text: &str) -> Result<TileGrid> {
    let doc: GridDoc = parse(text)?;
    if doc.layers.is_empty() {
        return Err(Error::schema("layers", "needs at least one layer"));
    }
    let mut shapes = Vec::with_capacity(doc.layers.len());
    for (l, layer) in doc.layers.iter().enumerate() {
        if layer.rows == 0 || layer.cols == 0 {
            return Err(Error::schema(
                format!("layers[{l}]"),
                "rows and cols must be positive",
            ));
        }
        shapes.push(LayerShape {
            rows: layer.rows,
            cols: layer.cols,
        });
    }
    let mut grid = TileGrid::new(shapes)?;
    for (l, layer) in doc.layers.iter().enumerate() {
        let Some(overhead) = &layer.overhead else {
            continue;
        };
        if overhead.len() != layer.rows {
            return Err(Error::schema(
                format!("layers[{l}].overhead"),
                format!("expected {} rows, got {}", layer.rows, overhead.len()),
            ));
        }
        for (r, row) in overhead.iter().enumerate() {
            if row.len() != layer.cols {
                return Err(Error::schema(
                    format!("layers[{l}].overhead[{r}]"),
                    format!("expected {} entries, got {}", layer.cols, row.len()),
                ));
            }
            for (c, &v) in row.iter().enumerate() {
                grid.set_overhead(TileCoord::new(l, r, c), v).map_err(|_| {
                    Error::schema(
                        format!("layers[{l}].overhead[{r}][{c}]"),
                        format!("must be finite and non-negative, got {v}"),
                    )
                })?;
            }
        }
    }
    for (k, &t) in doc.vertical_links.iter().enumerate() {
        grid.add_vertical_link(t)
            .map_err(|e| Error::schema(format!("vertical_links[{k}]"), e.to_string()))?;
    }
    for (k, &t) in doc.disabled.iter().enumerate() {
        grid.disable(t)
            .map_err(|e| Error::schema(format!("disabled[{k}]"), e.to_string()))?;
    }
    Ok(grid)
}

pub fn save_grid(g: &TileGrid) -> String {
    let layers = g
        .layers()
        .iter()
        .enumerate()
        .map(|(l, s)| LayerDoc {
            rows: s.rows,
            cols: s.cols,
            overhead: Some(
                (0..s.rows)
                    .map(|r| {
                        (0..s.cols)
                            .map(|c| g.overhead(TileCoord::new(l, r, c)))
                            .collect()
                    })
                    .collect(),
            ),
        })
        .collect();
    to_json(&GridDoc {
        layers,
        vertical_links: g.vertical_links().iter().copied().collect(),
        disabled: g.disabled().iter().copied().collect(),
    })
}

// Area matrices.

/// An area matrix with an optional aspect-ratio bound.
#[derive(Clone, Debug, PartialEq)]
pub struct AreaDocument {
    pub areas: AreaMatrix,
    pub eta: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AreaDoc {
    areas: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
}

pub fn load_area_matrix(text: &str) -> Result<AreaDocument> {
    let doc: AreaDoc = parse(text)?;
    if doc.areas.is_empty() {
        return Err(Error::schema("areas", "needs at least one row"));
    }
    let cols = doc.areas[0].len();
    if cols == 0 {
        return Err(Error::schema("areas[0]", "needs at least one column"));
    }
    for (i, row) in doc.areas.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::schema(
                format!("areas[{i}]"),
                format!("expected {cols} entries, got {}", row.len()),
            ));
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::schema(
                    format!("areas[{i}][{j}]"),
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
    }
    if let Some(eta) = doc.eta {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::schema(
                "eta",
                format!("must lie in (0, 1), got {eta}"),
            ));
        }
    }
    Ok(AreaDocument {
        areas: AreaMatrix::from_rows(&doc.areas)?,
        eta: doc.eta,
    })
}

pub fn save_area_matrix(doc: &AreaDocument) -> String {
    to_json(&AreaDoc {
        areas: doc.areas.to_rows(),
        eta: doc.eta,
    })
}

// Mappings.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Placement {
    core: CoreId,
    tile: TileCoord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingDoc {
    assignment: Vec<Placement>,
}

impl Serialize for Mapping {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MappingDoc {
            assignment: self
                .iter()
                .map(|(core, tile)| Placement { core, tile })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mapping {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = MappingDoc::deserialize(d)?;
        let mut m = Mapping::new();
        for (k, p) in doc.assignment.iter().enumerate() {
            if m.tile_of(p.core).is_some() {
                return Err(serde::de::Error::custom(format!(
                    "assignment[{k}]: core {} is placed twice",
                    p.core
                )));
            }
            m.place(p.core, p.tile)
                .map_err(|e| serde::de::Error::custom(format!("assignment[{k}]: {e}")))?;
        }
        Ok(m)
    }
}

pub fn load_mapping(text: &str) -> Result<Mapping> {
    parse(text)
}

pub fn save_mapping(m: &Mapping) -> String {
    to_json(m)
}

// Reference tables.

/// Published metrics of one benchmark's baseline mapping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceEntry {
    pub name: String,
    pub area: f64,
    pub comm: f64,
    pub bandwidth: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceTable {
    pub benchmarks: Vec<ReferenceEntry>,
}

impl ReferenceTable {
    pub fn get(&self, name: &str) -> Option<&ReferenceEntry> {
        self.benchmarks.iter().find(|e| e.name == name)
    }
}

pub fn load_reference(text: &str) -> Result<ReferenceTable> {
    let table: ReferenceTable = parse(text)?;
    for (k, e) in table.benchmarks.iter().enumerate() {
        for (field, v) in [
            ("area", e.area),
            ("comm", e.comm),
            ("bandwidth", e.bandwidth),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::schema(
                    format!("benchmarks[{k}].{field}"),
                    format!("reference values must be positive, got {v}"),
                ));
            }
        }
        if table.benchmarks[..k].iter().any(|p| p.name == e.name) {
            return Err(Error::schema(
                format!("benchmarks[{k}].name"),
                format!("duplicate benchmark {:?}", e.name),
            ));
        }
    }
    Ok(table)
}

pub fn save_reference(t: &ReferenceTable) -> String {
    to_json(t)
}

// Kind detection.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    CoreGraph,
    Grid,
    AreaMatrix,
    Mapping,
    Reference,
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DocumentKind::CoreGraph => "core graph",
            DocumentKind::Grid => "tile grid",
            DocumentKind::AreaMatrix => "area matrix",
            DocumentKind::Mapping => "mapping",
            DocumentKind::Reference => "reference table",
        })
    }
}

/// Guesses the document kind from its top-level keys.
pub fn detect_kind(text: &str) -> Result<DocumentKind> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::schema("$", "document must be a JSON object"))?;
    let kinds = [
        ("cores", DocumentKind::CoreGraph),
        ("layers", DocumentKind::Grid),
        ("areas", DocumentKind::AreaMatrix),
        ("assignment", DocumentKind::Mapping),
        ("benchmarks", DocumentKind::Reference),
    ];
    kinds
        .iter()
        .find(|(key, _)| obj.contains_key(*key))
        .map(|(_, k)| *k)
        .ok_or_else(|| {
            Error::schema(
                "$",
                "unrecognised document: no cores, layers, areas, assignment or benchmarks key",
            )
        })
}

/// Loads and validates a document of any kind, returning its kind.
pub fn validate_document(text: &str) -> Result<DocumentKind> {
    let kind = detect_kind(text)?;
    match kind {
        DocumentKind::CoreGraph => load_coregraph(text).map(drop),
        DocumentKind::Grid => load_grid(text).map(drop),
        DocumentKind::AreaMatrix => load_area_matrix(text).map(drop),
        DocumentKind::Mapping => load_mapping(text).map(drop),
        DocumentKind::Reference => load_reference(text).map(drop),
    }?;
    Ok(kind)
}
