// SPDX-License-Identifier: Apache-2.0

//! Area-aware floorplanning and core mapping for tile-based SoCs.
//!
//! A chip is a grid of tiles; tile `(i, j)` of a layer must hold content of
//! area `F_ij` inside a rectangle `r_i x c_j`. Three models price the
//! smallest enclosing square: a single-chord LP ([`linear::build_lp`]), a
//! multi-spline MILP ([`linear::build_lp_multispline`]) and the exact
//! semidefinite block model ([`sdp::build_sdp`]). The [`mapper`] anneals a
//! core-to-tile assignment with any of them as area oracle.

pub mod bench;
pub mod cli;
pub mod error;
pub mod io;
pub mod linear;
pub mod mapper;
pub mod metrics;
pub mod model;
pub mod report;
pub mod sdp;
pub mod svg;

pub use error::{Error, Result};
