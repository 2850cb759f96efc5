// SPDX-License-Identifier: Apache-2.0

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{CoreGraph, CoreId, Mapping, TileCoord, TileGrid};

/// Largest cores first (ties by id) onto tiles in layer, row, column order.
pub fn initial_solution(graph: &CoreGraph, grid: &TileGrid) -> Result<Mapping> {
    let tiles: Vec<TileCoord> = grid.tiles().collect();
    if graph.len() > tiles.len() {
        return Err(Error::invalid(format!(
            "{} cores do not fit on {} tiles",
            graph.len(),
            tiles.len()
        )));
    }
    let mut cores: Vec<_> = graph.cores().iter().collect();
    cores.sort_by(|a, b| b.area.total_cmp(&a.area).then(a.id.cmp(&b.id)));
    Mapping::from_pairs(cores.iter().zip(&tiles).map(|(c, t)| (c.id, *t)))
}

/// A proposed change: `core` goes to `to`; `swap_with` is the core already
/// there, if any, which moves to `core`'s old tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub core: CoreId,
    pub to: TileCoord,
    pub swap_with: Option<CoreId>,
}

/// Draws a uniformly random mapped core and a uniformly random tile other
/// than its own. `None` when nothing can move.
pub fn propose<R: Rng + ?Sized>(m: &Mapping, tiles: &[TileCoord], rng: &mut R) -> Option<Move> {
    if m.is_empty() || tiles.len() < 2 {
        return None;
    }
    let (core, from) = m.iter().nth(rng.gen_range(0..m.len()))?;
    let here = tiles.iter().position(|t| *t == from)?;
    let mut k = rng.gen_range(0..tiles.len() - 1);
    if k >= here {
        k += 1;
    }
    let to = tiles[k];
    Some(Move {
        core,
        to,
        swap_with: m.core_at(to),
    })
}

pub fn apply(m: &mut Mapping, mv: Move) {
    match mv.swap_with {
        Some(other) => m.swap(mv.core, other).expect("both cores are mapped"),
        None => m.place(mv.core, mv.to).expect("target tile is free"),
    }
}

/// Moves one random core to a random other tile, swapping with its
/// occupant if the tile is taken.
pub fn neighbor<R: Rng + ?Sized>(m: &Mapping, grid: &TileGrid, rng: &mut R) -> Mapping {
    let tiles: Vec<TileCoord> = grid.tiles().collect();
    let mut next = m.clone();
    if let Some(mv) = propose(m, &tiles, rng) {
        apply(&mut next, mv);
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Core;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(areas: &[f64]) -> CoreGraph {
        let cores = areas
            .iter()
            .enumerate()
            .map(|(k, &area)| Core {
                id: k as u32,
                area,
                name: None,
            })
            .collect();
        CoreGraph::new(cores, Vec::new()).unwrap()
    }

    #[test]
    fn initial_solution_sorts_by_area() {
        let g = graph(&[5.0, 3.0, 9.0, 1.0]);
        let grid = TileGrid::uniform(1, 2, 2).unwrap();
        let m = initial_solution(&g, &grid).unwrap();
        let order: Vec<_> = grid.tiles().map(|t| m.core_at(t).unwrap()).collect();
        assert_eq!(order, vec![2, 0, 1, 3]);
    }

    #[test]
    fn ties_break_by_id() {
        let g = graph(&[1.0, 1.0, 1.0]);
        let grid = TileGrid::uniform(1, 1, 3).unwrap();
        let m = initial_solution(&g, &grid).unwrap();
        let order: Vec<_> = grid.tiles().map(|t| m.core_at(t).unwrap()).collect();
        assert_eq!(order, vec![0, 1, 2]);
    }

    #[test]
    fn too_many_cores() {
        let g = graph(&[1.0; 3]);
        assert!(initial_solution(&g, &TileGrid::uniform(1, 1, 2).unwrap()).is_err());
    }

    #[test]
    fn single_core_always_moves() {
        let g = graph(&[1.0]);
        let grid = TileGrid::uniform(1, 2, 2).unwrap();
        let mut m = initial_solution(&g, &grid).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = neighbor(&m, &grid, &mut rng);
            assert_ne!(n.tile_of(0), m.tile_of(0));
            m = n;
        }
    }

    #[test]
    fn full_grid_always_swaps() {
        let g = graph(&[1.0, 2.0, 3.0, 4.0]);
        let grid = TileGrid::uniform(1, 2, 2).unwrap();
        let tiles: Vec<_> = grid.tiles().collect();
        let m = initial_solution(&g, &grid).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(propose(&m, &tiles, &mut rng).unwrap().swap_with.is_some());
        }
    }

    #[test]
    fn seeded_replay() {
        let g = graph(&[1.0, 2.0, 3.0]);
        let grid = TileGrid::uniform(2, 2, 2).unwrap();
        let walk = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut m = initial_solution(&g, &grid).unwrap();
            (0..100)
                .map(|_| {
                    m = neighbor(&m, &grid, &mut rng);
                    m.clone()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(walk(3), walk(3));
        assert_ne!(walk(3), walk(4));
    }
}
