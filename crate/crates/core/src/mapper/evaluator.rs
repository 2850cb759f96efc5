// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linear::{build_lp, solve_lp, DEFAULT_LP_TOL};
use crate::metrics::bounding_metrics;
use crate::model::{AreaMatrix, FloorplanProblem};
use crate::sdp::{build_sdp, solve_sdp, DEFAULT_SDP_TOL};

/// Floorplan model used to price a layer inside the annealer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaModel {
    Lp,
    #[default]
    Sdp,
}

/// Prices one layer's area matrix.
pub trait AreaEvaluator {
    fn layer_area(&mut self, areas: &AreaMatrix) -> Result<f64>;
}

impl<E: AreaEvaluator + ?Sized> AreaEvaluator for &mut E {
    fn layer_area(&mut self, areas: &AreaMatrix) -> Result<f64> {
        (**self).layer_area(areas)
    }
}

/// Bounding area `(sum r)(sum c)` of the optimal floorplan.
#[derive(Clone, Copy, Debug)]
pub struct FloorplanEvaluator {
    pub model: AreaModel,
    pub eta: f64,
    pub tol: f64,
}

impl FloorplanEvaluator {
    pub fn new(model: AreaModel, eta: f64) -> Self {
        let tol = match model {
            AreaModel::Lp => DEFAULT_LP_TOL,
            AreaModel::Sdp => DEFAULT_SDP_TOL,
        };
        Self { model, eta, tol }
    }
}

impl AreaEvaluator for FloorplanEvaluator {
    fn layer_area(&mut self, areas: &AreaMatrix) -> Result<f64> {
        if areas.total() == 0.0 {
            return Ok(0.0);
        }
        let p = FloorplanProblem::new(areas.clone(), self.eta)?;
        let sol = match self.model {
            AreaModel::Lp => solve_lp(&build_lp(&p), self.tol)?,
            AreaModel::Sdp => solve_sdp(&build_sdp(&p), self.tol)?,
        };
        Ok(bounding_metrics(&sol, areas)?.bounding_area)
    }
}

/// Memoises an evaluator by matrix contents. Matrices are keyed by shape
/// and the bit patterns of their entries, so two mappings that produce the
/// same layer matrix share one solve.
#[derive(Debug)]
pub struct AreaCache<E> {
    inner: E,
    enabled: bool,
    table: HashMap<(usize, usize, Vec<u64>), f64>,
    hits: usize,
    misses: usize,
}

impl<E: AreaEvaluator> AreaCache<E> {
    pub fn new(inner: E) -> Self {
        Self::with_enabled(inner, true)
    }

    /// A disabled cache forwards every call.
    pub fn with_enabled(inner: E, enabled: bool) -> Self {
        Self {
            inner,
            enabled,
            table: HashMap::new(),
            hits: 0,
            misses: 0,
        }
    }

    pub fn hits(&self) -> usize {
        self.hits
    }

    /// Calls that reached the wrapped evaluator.
    pub fn misses(&self) -> usize {
        self.misses
    }

    pub fn into_inner(self) -> E {
        self.inner
    }
}

fn key(areas: &AreaMatrix) -> (usize, usize, Vec<u64>) {
    // Adding 0.0 folds -0.0 into +0.0.
    let bits = areas
        .as_slice()
        .iter()
        .map(|v| (v + 0.0).to_bits())
        .collect();
    (areas.rows(), areas.cols(), bits)
}

impl<E: AreaEvaluator> AreaEvaluator for AreaCache<E> {
    fn layer_area(&mut self, areas: &AreaMatrix) -> Result<f64> {
        if !self.enabled {
            self.misses += 1;
            return self.inner.layer_area(areas);
        }
        let k = key(areas);
        if let Some(&v) = self.table.get(&k) {
            self.hits += 1;
            return Ok(v);
        }
        self.misses += 1;
        let v = self.inner.layer_area(areas)?;
        self.table.insert(k, v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Counting(usize);

    impl AreaEvaluator for Counting {
        fn layer_area(&mut self, areas: &AreaMatrix) -> Result<f64> {
            self.0 += 1;
            Ok(areas.total())
        }
    }

    #[test]
    fn cache_hits_on_identical_contents() {
        let mut cache = AreaCache::new(Counting(0));
        let a = AreaMatrix::from_rows(&[[1.0, 2.0]]).unwrap();
        let b = AreaMatrix::from_rows(&[[1.0, 2.0]]).unwrap();
        let t = AreaMatrix::from_rows(&[[1.0], [2.0]]).unwrap();
        assert_eq!(cache.layer_area(&a).unwrap(), 3.0);
        assert_eq!(cache.layer_area(&b).unwrap(), 3.0);
        cache.layer_area(&t).unwrap();
        assert_eq!((cache.hits(), cache.misses()), (1, 2));
        assert_eq!(cache.into_inner().0, 2);
    }

    #[test]
    fn disabled_cache_forwards() {
        let mut cache = AreaCache::with_enabled(Counting(0), false);
        let a = AreaMatrix::from_rows(&[[1.0]]).unwrap();
        cache.layer_area(&a).unwrap();
        cache.layer_area(&a).unwrap();
        assert_eq!(cache.into_inner().0, 2);
    }

    #[test]
    fn floorplan_evaluator_prices_bounding_area() {
        let f = AreaMatrix::from_rows(&[[1.0, 1.0]]).unwrap();
        let sdp = FloorplanEvaluator::new(AreaModel::Sdp, 0.1)
            .layer_area(&f)
            .unwrap();
        assert!((sdp - 2.0).abs() < 1e-5);
        let lp = FloorplanEvaluator::new(AreaModel::Lp, 0.1)
            .layer_area(&f)
            .unwrap();
        assert!((lp - 5.378).abs() < 1e-3);
        let empty = AreaMatrix::zeros(2, 2).unwrap();
        assert_eq!(
            FloorplanEvaluator::new(AreaModel::Sdp, 0.1)
                .layer_area(&empty)
                .unwrap(),
            0.0
        );
    }
}
