// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::model::FloorplanSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("numerical failure after {iterations} pivots: {message}")]
    Numerical {
        message: String,
        iterations: usize,
        /// Objective value after every pivot, oldest first.
        trace: Vec<f64>,
    },

    #[error("barrier method did not converge within {steps} Newton steps (gap bound {gap:.3e})")]
    NonConvergence {
        steps: usize,
        gap: f64,
        best: Box<FloorplanSolution>,
    },

    #[error("branch-and-bound node limit {limit} reached")]
    NodeLimit {
        limit: usize,
        incumbent: Option<Box<FloorplanSolution>>,
    },

    #[error("layer {layer}: {source}")]
    Layer {
        layer: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }
}
