// SPDX-License-Identifier: Apache-2.0

//! Synthetic 3D-SoC benchmarks: tile overheads from router ports and TSVs,
//! and the three homogeneous reference chips.

mod generate;

pub use generate::{
    apply_overheads, gen_benchmark, port_count, published_layer_areas, tile_overhead, Benchmark,
    LowestLayer, PublishedLayer, SocSpec, BENCHMARK_IDS,
};
