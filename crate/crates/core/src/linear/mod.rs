// SPDX-License-Identifier: Apache-2.0

//! Linearised area models: the single-chord LP and the multi-spline MILP.

mod model;
pub mod simplex;
mod solve;

pub use model::{
    build_lp, build_lp_multispline, chord_rhs, spline_knots, LpModel, MilpModel, RowKind,
    SelectorGroup, MAX_SEGMENTS,
};
pub use solve::{solve_lp, solve_milp, MilpOptions, DEFAULT_LP_TOL, DEFAULT_NODE_LIMIT};
