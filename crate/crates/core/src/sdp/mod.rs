// SPDX-License-Identifier: Apache-2.0

//! Exact area model with 2x2 PSD blocks.

mod barrier;
mod model;
mod oracle;

pub use barrier::{solve_sdp, solve_sdp_with, BarrierOptions, DEFAULT_SDP_TOL};
pub use model::{
    build_sdp, FrobeniusTerm, Mat2, SdpModel, SdpRow, SdpRowKind, LOWER_RIGHT, OFF_DIAGONAL,
    UPPER_LEFT,
};
pub use oracle::{sdp_reference_oracle, Bracket, ORACLE_MAX_TILES};
