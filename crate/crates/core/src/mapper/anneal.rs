// SPDX-License-Identifier: Apache-2.0

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evaluator::{AreaCache, AreaEvaluator, AreaModel, FloorplanEvaluator};
use super::moves::{apply, initial_solution, propose};
use crate::error::{Error, Result};
use crate::metrics::{area_matrix_from_mapping, comm_cost, max_link_load};
use crate::model::{CoreGraph, Mapping, TileCoord, TileGrid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SAParams {
    pub initial_temperature: f64,
    pub cooling_factor: f64,
    /// Iterations between two coolings; 1 cools every iteration.
    pub cooling_period: usize,
    pub iterations: usize,
    pub reruns: usize,
    pub w_area: f64,
    pub w_comm: f64,
    pub seed: u64,
    pub area_model: AreaModel,
    pub eta: f64,
    /// Memoise layer areas by matrix contents.
    pub cache: bool,
    /// Keep a per-iteration log in [`SAResult::trace`].
    pub trace: bool,
}

impl Default for SAParams {
    fn default() -> Self {
        Self {
            initial_temperature: 30.0,
            cooling_factor: 0.98,
            cooling_period: 100,
            iterations: 15_000,
            reruns: 20,
            w_area: 0.5,
            w_comm: 0.5,
            seed: 0,
            area_model: AreaModel::Sdp,
            eta: 0.1,
            cache: true,
            trace: false,
        }
    }
}

impl SAParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::invalid(what.to_string()));
        if self.iterations == 0 {
            return bad("iterations must be at least 1");
        }
        if self.reruns == 0 {
            return bad("reruns must be at least 1");
        }
        if self.cooling_period == 0 {
            return bad("cooling period must be at least 1");
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return bad("cooling factor must lie in (0, 1)");
        }
        if !(self.initial_temperature > 0.0 && self.initial_temperature.is_finite()) {
            return bad("initial temperature must be positive");
        }
        if !(self.w_area >= 0.0 && self.w_comm >= 0.0 && self.w_area + self.w_comm > 0.0) {
            return bad("weights must be non-negative with a positive sum");
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return bad("eta must lie in (0, 1)");
        }
        Ok(())
    }
}

/// Reference scales for the two cost terms, taken from the initial solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalizers {
    pub area: f64,
    pub comm: f64,
}

impl Normalizers {
    /// A zero metric is replaced by 1 so its term stays finite.
    pub fn new(area: f64, comm: f64) -> Self {
        let fix = |v: f64| if v > 0.0 { v } else { 1.0 };
        Self {
            area: fix(area),
            comm: fix(comm),
        }
    }
}

/// Summed bounding area over all layers and communication cost.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub area: f64,
    pub comm: f64,
}

pub fn evaluate<E: AreaEvaluator>(
    m: &Mapping,
    graph: &CoreGraph,
    grid: &TileGrid,
    evaluator: &mut E,
) -> Result<Evaluation> {
    let mut area = 0.0;
    for layer in 0..grid.layer_count() {
        let f = area_matrix_from_mapping(graph, grid, m, layer)?;
        area += evaluator.layer_area(&f).map_err(|e| Error::Layer {
            layer,
            source: Box::new(e),
        })?;
    }
    Ok(Evaluation {
        area,
        comm: comm_cost(graph, grid, m)?,
    })
}

fn weighted(e: Evaluation, params: &SAParams, norms: Normalizers) -> f64 {
    params.w_area * e.area / norms.area + params.w_comm * e.comm / norms.comm
}

/// `w_area area / area0 + w_comm comm / comm0`.
pub fn sa_cost<E: AreaEvaluator>(
    m: &Mapping,
    graph: &CoreGraph,
    grid: &TileGrid,
    params: &SAParams,
    norms: Normalizers,
    evaluator: &mut E,
) -> Result<f64> {
    Ok(weighted(
        evaluate(m, graph, grid, evaluator)?,
        params,
        norms,
    ))
}

/// Metropolis acceptance probability of a move that changes the cost by
/// `delta` at temperature `t`.
pub fn acceptance_probability(delta: f64, t: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else {
        (-delta / t).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub rerun: usize,
    pub iteration: usize,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub cost: f64,
    pub accepted: bool,
    pub area: f64,
    pub comm: f64,
    pub best: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RerunOutcome {
    pub rerun: usize,
    pub seed: u64,
    /// Cost of the state the chain ended in.
    pub final_cost: f64,
    /// Best cost seen in this rerun; the metrics below belong to it.
    pub best_cost: f64,
    pub area: f64,
    pub comm: f64,
    pub max_link_load: f64,
    pub accepted_moves: usize,
    pub solver_calls: usize,
    pub cache_hits: usize,
    pub best_mapping: Mapping,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RerunFailure {
    pub rerun: usize,
    pub message: String,
}

/// Mean and population standard deviation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    /// Welford's single-pass update.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
        for v in values {
            n += 1;
            let d = v - mean;
            mean += d / n as f64;
            m2 += d * (v - mean);
        }
        if n == 0 {
            return Self::default();
        }
        Self {
            mean,
            std: (m2 / n as f64).max(0.0).sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub cost: Stat,
    pub area: Stat,
    pub comm: Stat,
    pub max_link_load: Stat,
}

impl Aggregate {
    pub fn of(reruns: &[RerunOutcome]) -> Self {
        Self {
            cost: Stat::of(reruns.iter().map(|r| r.best_cost)),
            area: Stat::of(reruns.iter().map(|r| r.area)),
            comm: Stat::of(reruns.iter().map(|r| r.comm)),
            max_link_load: Stat::of(reruns.iter().map(|r| r.max_link_load)),
        }
    }
}

/// Metrics of the starting mapping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialMetrics {
    pub area: f64,
    pub comm: f64,
    pub max_link_load: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SAResult {
    pub params: SAParams,
    pub initial: InitialMetrics,
    pub normalizers: Normalizers,
    /// Best mapping over all reruns (lowest cost, earliest rerun on ties).
    pub best_mapping: Mapping,
    pub best_cost: f64,
    pub reruns: Vec<RerunOutcome>,
    pub failures: Vec<RerunFailure>,
    pub aggregate: Aggregate,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

struct Chain {
    outcome: RerunOutcome,
    trace: Vec<TraceRow>,
}

fn run_chain<E: AreaEvaluator>(
    rerun: usize,
    graph: &CoreGraph,
    grid: &TileGrid,
    params: &SAParams,
    norms: Normalizers,
    start: &Mapping,
    evaluator: &mut AreaCache<E>,
) -> Result<Chain> {
    let seed = params.seed ^ rerun as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tiles: Vec<TileCoord> = grid.tiles().collect();

    let mut current = start.clone();
    let mut cur_eval = evaluate(&current, graph, grid, evaluator)?;
    let mut cur_cost = weighted(cur_eval, params, norms);
    let mut best = current.clone();
    let mut best_eval = cur_eval;
    let mut best_cost = cur_cost;
    let mut t = params.initial_temperature;
    let mut accepted_moves = 0;
    let mut trace = Vec::new();

    for it in 0..params.iterations {
        let mut accepted = false;
        if let Some(mv) = propose(&current, &tiles, &mut rng) {
            let mut cand = current.clone();
            apply(&mut cand, mv);
            let eval = evaluate(&cand, graph, grid, evaluator)?;
            let cost = weighted(eval, params, norms);
            let delta = cost - cur_cost;
            accepted = delta <= 0.0 || rng.gen::<f64>() < acceptance_probability(delta, t);
            if accepted {
                current = cand;
                cur_eval = eval;
                cur_cost = cost;
                accepted_moves += 1;
                if cost < best_cost {
                    best = current.clone();
                    best_eval = eval;
                    best_cost = cost;
                }
            }
        }
        if params.trace {
            trace.push(TraceRow {
                rerun,
                iteration: it,
                temperature: t,
                cost: cur_cost,
                accepted,
                area: cur_eval.area,
                comm: cur_eval.comm,
                best: best_cost,
            });
        }
        if (it + 1) % params.cooling_period == 0 {
            t *= params.cooling_factor;
        }
    }

    Ok(Chain {
        outcome: RerunOutcome {
            rerun,
            seed,
            final_cost: cur_cost,
            best_cost,
            area: best_eval.area,
            comm: best_eval.comm,
            max_link_load: max_link_load(graph, grid, &best)?,
            accepted_moves,
            solver_calls: evaluator.misses(),
            cache_hits: evaluator.hits(),
            best_mapping: best,
        },
        trace,
    })
}

/// Anneals with the floorplan model named in `params` as area evaluator.
pub fn simulated_annealing(
    graph: &CoreGraph,
    grid: &TileGrid,
    params: &SAParams,
) -> Result<SAResult> {
    let (model, eta) = (params.area_model, params.eta);
    simulated_annealing_with(graph, grid, params, || FloorplanEvaluator::new(model, eta))
}

/// Anneals with a caller-supplied evaluator; `make` builds one per rerun.
///
/// Reruns run on the rayon pool. Rerun `i` seeds its generator with
/// `seed ^ i`, and results are gathered in rerun order, so the outcome does
/// not depend on the number of workers.
pub fn simulated_annealing_with<E, F>(
    graph: &CoreGraph,
    grid: &TileGrid,
    params: &SAParams,
    make: F,
) -> Result<SAResult>
where
    E: AreaEvaluator,
    F: Fn() -> E + Sync,
{
    params.validate()?;
    let start = initial_solution(graph, grid)?;
    let mut probe = make();
    let init = evaluate(&start, graph, grid, &mut probe)?;
    let norms = Normalizers::new(init.area, init.comm);
    let initial = InitialMetrics {
        area: init.area,
        comm: init.comm,
        max_link_load: max_link_load(graph, grid, &start)?,
    };

    let chains: Vec<Result<Chain>> = (0..params.reruns)
        .into_par_iter()
        .map(|i| {
            let mut cache = AreaCache::with_enabled(make(), params.cache);
            run_chain(i, graph, grid, params, norms, &start, &mut cache)
        })
        .collect();

    let mut reruns = Vec::new();
    let mut failures = Vec::new();
    let mut trace = Vec::new();
    for (i, c) in chains.into_iter().enumerate() {
        match c {
            Ok(chain) => {
                trace.extend(chain.trace);
                reruns.push(chain.outcome);
            }
            Err(e) => failures.push(RerunFailure {
                rerun: i,
                message: e.to_string(),
            }),
        }
    }
    let Some(best) = reruns.iter().min_by(|a, b| {
        a.best_cost
            .total_cmp(&b.best_cost)
            .then(a.rerun.cmp(&b.rerun))
    }) else {
        return Err(Error::invalid(format!(
            "all {} reruns failed; first error: {}",
            failures.len(),
            failures.first().map_or("", |f| f.message.as_str())
        )));
    };

    Ok(SAResult {
        params: params.clone(),
        initial,
        normalizers: norms,
        best_mapping: best.best_mapping.clone(),
        best_cost: best.best_cost,
        aggregate: Aggregate::of(&reruns),
        reruns,
        failures,
        trace,
    })
}

/// Writes trace rows as CSV with a header.
pub fn write_trace<W: Write>(rows: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
