// SPDX-License-Identifier: Apache-2.0

//! Ratios against published reference numbers.

use serde::{Deserialize, Serialize};

use crate::io::ReferenceEntry;

/// `(value - reference) / reference`; negative means smaller than the
/// reference.
pub fn ratio(value: f64, reference: f64) -> f64 {
    (value - reference) / reference
}

/// Signed percentage with the precision used in published tables: two
/// decimals below 10 %, one below 100 %, none above.
pub fn format_percent(r: f64) -> String {
    let p = 100.0 * r;
    let decimals = match p.abs() {
        a if a < 10.0 => 2,
        a if a < 100.0 => 1,
        _ => 0,
    };
    let text = format!("{:.*}", decimals, p.abs());
    // Zero after rounding is printed unsigned.
    if text.chars().all(|ch| ch == '0' || ch == '.') {
        return format!("{text}%");
    }
    let sign = if p < 0.0 { '-' } else { '+' };
    format!("{sign}{text}%")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioColumns {
    pub area: f64,
    pub comm: f64,
    pub bandwidth: f64,
}

impl RatioColumns {
    pub fn against(area: f64, comm: f64, bandwidth: f64, reference: &ReferenceEntry) -> Self {
        Self {
            area: ratio(area, reference.area),
            comm: ratio(comm, reference.comm),
            bandwidth: ratio(bandwidth, reference.bandwidth),
        }
    }

    pub fn formatted(&self) -> [String; 3] {
        [
            format_percent(self.area),
            format_percent(self.comm),
            format_percent(self.bandwidth),
        ]
    }
}
