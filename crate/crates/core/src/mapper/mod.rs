// SPDX-License-Identifier: Apache-2.0

//! Simulated-annealing core mapping that trades floorplan area against
//! communication cost.

mod anneal;
mod evaluator;
mod moves;

pub use anneal::{
    acceptance_probability, evaluate, sa_cost, simulated_annealing, simulated_annealing_with,
    write_trace, Aggregate, Evaluation, InitialMetrics, Normalizers, RerunFailure, RerunOutcome,
    SAParams, SAResult, Stat, TraceRow,
};
pub use evaluator::{AreaCache, AreaEvaluator, AreaModel, FloorplanEvaluator};
pub use moves::{apply, initial_solution, neighbor, propose, Move};
