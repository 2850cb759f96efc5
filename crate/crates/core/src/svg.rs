// SPDX-License-Identifier: Apache-2.0

//! Static SVG drawing of a floorplan: one light-gray rectangle per tile and,
//! inside it, an orange rectangle of the tile's content area.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{AreaMatrix, FloorplanSolution};

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 10.0;

/// Renders `sol` for `areas`. Each content rectangle takes the aspect ratio
/// of its tile, clamped to `[eta, 1/eta]`, and is centred in the tile.
pub fn render_svg(sol: &FloorplanSolution, areas: &AreaMatrix, eta: f64) -> Result<String> {
    let (l, k) = (areas.rows(), areas.cols());
    if sol.r.len() != l || sol.c.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "solution is {}x{} but the area matrix is {l}x{k}",
            sol.r.len(),
            sol.c.len()
        )));
    }
    let height: f64 = sol.r.iter().sum();
    let width: f64 = sol.c.iter().sum();
    let side = height.max(width);
    let scale = if side > 0.0 { CANVAS / side } else { 1.0 };
    let total = CANVAS + 2.0 * MARGIN;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    let _ = writeln!(
        out,
        r#"  <rect class="bounds" x="{MARGIN}" y="{MARGIN}" width="{w:.4}" height="{h:.4}" fill="none" stroke="black" stroke-width="1"/>"#,
        w = width * scale,
        h = height * scale
    );

    let mut y = 0.0;
    for i in 0..l {
        let mut x = 0.0;
        for j in 0..k {
            let (tw, th) = (sol.c[j], sol.r[i]);
            let _ = writeln!(
                out,
                r##"  <rect class="tile" data-row="{i}" data-col="{j}" x="{:.4}" y="{:.4}" width="{:.4}" height="{:.4}" fill="#d9d9d9" stroke="#7f7f7f" stroke-width="0.5"/>"##,
                MARGIN + x * scale,
                MARGIN + y * scale,
                tw * scale,
                th * scale
            );
            let f = areas.get(i, j);
            if f > 0.0 {
                let aspect = if th > 0.0 && tw > 0.0 { tw / th } else { 1.0 };
                let aspect = aspect.clamp(eta, 1.0 / eta);
                let (cw, ch) = ((f * aspect).sqrt(), (f / aspect).sqrt());
                let _ = writeln!(
                    out,
                    r##"  <rect class="core" data-row="{i}" data-col="{j}" x="{:.4}" y="{:.4}" width="{:.4}" height="{:.4}" fill="#f28e2b"/>"##,
                    MARGIN + (x + (tw - cw) / 2.0) * scale,
                    MARGIN + (y + (th - ch) / 2.0) * scale,
                    cw * scale,
                    ch * scale
                );
            }
            x += tw;
        }
        y += sol.r[i];
    }
    out.push_str("</svg>\n");
    Ok(out)
}
