// SPDX-License-Identifier: Apache-2.0

//! Solver results against independently derived values: closed forms and
//! exhaustive enumeration.

use approx::assert_relative_eq;
use proptest::prelude::*;

use socarea::linear::simplex::{self, LinearProgram, Relation, Row, SimplexOptions};
use socarea::linear::{
    build_lp, build_lp_multispline, solve_lp, solve_milp, MilpOptions, DEFAULT_LP_TOL,
};
use socarea::model::{AreaMatrix, FloorplanProblem};
use socarea::sdp::{build_sdp, sdp_reference_oracle, solve_sdp, DEFAULT_SDP_TOL};

fn problem(l: usize, k: usize, data: Vec<f64>, eta: f64) -> FloorplanProblem {
    FloorplanProblem::new(AreaMatrix::new(l, k, data).unwrap(), eta).unwrap()
}

/// Points on `r c = f` equally spaced in `r` between the aspect limits.
fn knots(f: f64, eta: f64, segments: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = ((f * eta).sqrt(), (f / eta).sqrt());
    (0..=segments)
        .map(|s| {
            let r = lo + (hi - lo) * s as f64 / segments as f64;
            (r, f / r)
        })
        .collect()
}

/// Optimum of the multi-spline model by solving one plain LP per segment
/// assignment. Variables: r_0..r_l, c_0..c_k, x.
fn milp_by_enumeration(f: &AreaMatrix, eta: f64, segments: usize) -> f64 {
    let (l, k) = (f.rows(), f.cols());
    let n = l + k + 1;
    let x = l + k;
    let tiles: Vec<(usize, usize, f64)> = f.iter().collect();
    let total = segments.pow(tiles.len() as u32);
    let mut best = f64::INFINITY;
    for code in 0..total {
        let mut rows = vec![
            Row::new(
                std::iter::once((x, 1.0))
                    .chain((0..l).map(|i| (i, -1.0)))
                    .collect(),
                Relation::Ge,
                0.0,
            ),
            Row::new(
                std::iter::once((x, 1.0))
                    .chain((0..k).map(|j| (l + j, -1.0)))
                    .collect(),
                Relation::Ge,
                0.0,
            ),
        ];
        let mut rest = code;
        for &(i, j, a) in &tiles {
            let s = rest % segments;
            rest /= segments;
            rows.push(Row::new(vec![(i, 1.0), (l + j, -eta)], Relation::Ge, 0.0));
            rows.push(Row::new(vec![(l + j, 1.0), (i, -eta)], Relation::Ge, 0.0));
            let kn = knots(a, eta, segments);
            let ((r0, c0), (r1, c1)) = (kn[s], kn[s + 1]);
            // Line through both knots, feasible side away from the origin.
            rows.push(Row::new(
                vec![(i, c0 - c1), (l + j, r1 - r0)],
                Relation::Ge,
                (c0 - c1) * r0 + (r1 - r0) * c0,
            ));
            rows.push(Row::new(vec![(i, 1.0)], Relation::Ge, r0));
            rows.push(Row::new(vec![(l + j, 1.0)], Relation::Ge, c1));
        }
        let mut objective = vec![0.0; n];
        objective[x] = 1.0;
        let lp = LinearProgram {
            num_vars: n,
            objective,
            rows,
        };
        if let Ok(out) = simplex::solve(&lp, &SimplexOptions::default()) {
            best = best.min(out.objective);
        }
    }
    best
}

#[test]
fn milp_known_instances_match_enumeration() {
    let cases: [(usize, usize, &[f64], f64, usize); 4] = [
        (1, 1, &[1.0], 0.1, 2),
        (1, 2, &[1.0, 1.0], 0.1, 4),
        (2, 2, &[4.0, 1.0, 2.0, 9.0], 0.3, 3),
        (2, 2, &[0.5, 16.0, 8.0, 3.0], 0.1, 4),
    ];
    for (l, k, data, eta, s) in cases {
        let p = problem(l, k, data.to_vec(), eta);
        let got = solve_milp(
            &build_lp_multispline(&p, s).unwrap(),
            &MilpOptions::default(),
        )
        .unwrap();
        let expected = milp_by_enumeration(p.areas(), eta, s);
        assert_relative_eq!(got.x, expected, max_relative = 1e-7);
    }
}

#[test]
fn single_tile_single_chord_closed_form() {
    for (f, eta) in [(1.0, 0.1), (9.0, 0.5), (2.5, 0.3)] {
        let p = problem(1, 1, vec![f], eta);
        let x = solve_lp(&build_lp(&p), DEFAULT_LP_TOL).unwrap().x;
        assert_relative_eq!(
            x,
            ((f * eta).sqrt() + (f / eta).sqrt()) / 2.0,
            max_relative = 1e-9
        );
    }
}

#[test]
fn small_sdp_instances_inside_oracle_bracket() {
    let cases: [(usize, usize, &[f64], f64); 3] = [
        (2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 0.1),
        (3, 2, &[9.0, 0.5, 0.5, 9.0, 2.0, 2.0], 0.3),
        (1, 6, &[1.0, 1.0, 2.0, 2.0, 4.0, 4.0], 0.1),
    ];
    for (l, k, data, eta) in cases {
        let p = problem(l, k, data.to_vec(), eta);
        let b = sdp_reference_oracle(&p, 30).unwrap();
        let x = solve_sdp(&build_sdp(&p), DEFAULT_SDP_TOL).unwrap().x;
        assert!(b.width() <= 1e-2, "{b:?}");
        assert!(b.contains(x, DEFAULT_SDP_TOL * x), "x = {x}, {b:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn milp_matches_enumeration(
        (l, k) in (1usize..=2, 1usize..=2),
        seed in prop::collection::vec(0.5f64..16.0, 4),
        eta in prop::sample::select(vec![0.1, 0.3, 0.5]),
        segments in 2usize..=4,
    ) {
        let p = problem(l, k, seed[..l * k].to_vec(), eta);
        let got = solve_milp(&build_lp_multispline(&p, segments).unwrap(), &MilpOptions::default()).unwrap();
        let expected = milp_by_enumeration(p.areas(), eta, segments);
        prop_assert!((got.x - expected).abs() <= 1e-7 * expected, "{} vs {}", got.x, expected);
    }

    /// One row of `k` equal tiles: by symmetry r = k c and r + c = chord,
    /// so x = k chord / (k + 1) whenever eta k <= 1.
    #[test]
    fn lp_uniform_row(k in 1usize..=6, f in 0.5f64..16.0, transpose in any::<bool>()) {
        let eta = 0.1;
        let (l, k2) = if transpose { (k, 1) } else { (1, k) };
        let p = problem(l, k2, vec![f; k], eta);
        let x = solve_lp(&build_lp(&p), DEFAULT_LP_TOL).unwrap().x;
        let chord = (f * eta).sqrt() + (f / eta).sqrt();
        let expected = k as f64 * chord / (k as f64 + 1.0);
        prop_assert!((x - expected).abs() <= 1e-9 * expected.max(1.0), "{x} vs {expected}");
    }

    /// For F = a b' the bound (sum r)(sum c) >= sum F is attained by r ~ a,
    /// c ~ b, so x = sqrt(sum a * sum b).
    #[test]
    fn sdp_rank_one_closed_form(
        a in prop::collection::vec(1.0f64..2.0, 1..=4),
        b in prop::collection::vec(1.0f64..2.0, 1..=4),
    ) {
        let data = a.iter().flat_map(|ai| b.iter().map(move |bj| ai * bj)).collect();
        let p = problem(a.len(), b.len(), data, 0.1);
        let x = solve_sdp(&build_sdp(&p), DEFAULT_SDP_TOL).unwrap().x;
        let expected = (a.iter().sum::<f64>() * b.iter().sum::<f64>()).sqrt();
        prop_assert!(x >= expected * (1.0 - 1e-9), "{x} < {expected}");
        prop_assert!(x <= expected * (1.0 + 1e-6), "{x} > {expected}");
    }

    /// No floorplan fits in a square smaller than the total content.
    #[test]
    fn sdp_at_least_sqrt_total(
        (l, k) in (1usize..=4, 1usize..=4),
        seed in prop::collection::vec(0.5f64..16.0, 16),
        eta in prop::sample::select(vec![0.1, 0.3, 0.5]),
    ) {
        let p = problem(l, k, seed[..l * k].to_vec(), eta);
        let x = solve_sdp(&build_sdp(&p), DEFAULT_SDP_TOL).unwrap().x;
        prop_assert!(x * x >= p.areas().total() * (1.0 - 1e-9));
    }
}

/// An all-zero row imposes no bound, so its height collapses and the side
/// matches the instance without that row. The LP keeps it at the aspect
/// limit instead.
#[test]
fn zero_row_is_free_in_sdp_only() {
    let with_zero = problem(2, 2, vec![0.0, 0.0, 1.0, 1.0], 0.1);
    let without = problem(1, 2, vec![1.0, 1.0], 0.1);
    let x = solve_sdp(&build_sdp(&with_zero), DEFAULT_SDP_TOL)
        .unwrap()
        .x;
    assert_relative_eq!(x, 2f64.sqrt(), max_relative = 1e-6);
    let lp_with = solve_lp(&build_lp(&with_zero), DEFAULT_LP_TOL).unwrap().x;
    let lp_without = solve_lp(&build_lp(&without), DEFAULT_LP_TOL).unwrap().x;
    assert!(lp_with >= lp_without - 1e-9);
}
