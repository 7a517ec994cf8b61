//! Seeded random Markov tree maps.
//!
//! A random recursive tree gets a uniform grid on every edge; each grid
//! point is sent to a random grid point and each cell runs along the
//! geodesic between the images of its ends. Geodesics between grid points
//! are unions of cells, so the result is Markov by construction.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric_graph::{EdgeId, Graph, Point};
use crate::pl_map::markov::MarkovMap;
use crate::pl_map::{Path, Piece, PLMap};
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct RandomMapConfig {
    pub min_endpoints: usize,
    pub max_endpoints: usize,
    pub max_cells: usize,
    /// Cells per edge are drawn from `1..=max_subdivision`.
    pub max_subdivision: usize,
}

impl Default for RandomMapConfig {
    fn default() -> Self {
        RandomMapConfig {
            min_endpoints: 2,
            max_endpoints: 6,
            max_cells: 12,
            max_subdivision: 3,
        }
    }
}

fn random_tree<R: Rng>(rng: &mut R, cfg: &RandomMapConfig) -> Result<Graph> {
    for _ in 0..1000 {
        let edges = rng.gen_range(1..=cfg.max_cells);
        let mut list = Vec::with_capacity(edges);
        for i in 1..=edges {
            let parent = rng.gen_range(0..i);
            let (u, v) = if rng.gen_bool(0.5) { (parent, i) } else { (i, parent) };
            list.push((format!("e{}", i - 1), format!("v{u}"), format!("v{v}")));
        }
        let g = Graph::from_edges(list)?;
        let ends = g.endpoint_count();
        if (cfg.min_endpoints..=cfg.max_endpoints).contains(&ends) {
            return Ok(g);
        }
    }
    Err(Error::InvalidArgument("no tree within the endpoint bounds".into()))
}

pub fn random_markov_map<R: Rng>(rng: &mut R, cfg: &RandomMapConfig) -> Result<MarkovMap> {
    if cfg.max_cells == 0 || cfg.max_subdivision == 0 || cfg.min_endpoints > cfg.max_endpoints {
        return Err(Error::InvalidArgument("empty random map configuration".into()));
    }
    let graph = Arc::new(random_tree(rng, cfg)?);
    let g = &*graph;
    let mut budget = cfg.max_cells - g.edge_count();
    let mut subdivision = Vec::with_capacity(g.edge_count());
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    subdivision.resize(g.edge_count(), 1usize);
    for e in order {
        let extra = rng.gen_range(0..cfg.max_subdivision).min(budget);
        subdivision[e] += extra;
        budget -= extra;
    }
    let grid: Vec<Vec<Rational>> = subdivision
        .iter()
        .map(|&m| (0..=m).map(|k| rational::ratio(k as i64, m as i64)).collect())
        .collect();
    let mut points: Vec<Point> = grid
        .iter()
        .enumerate()
        .flat_map(|(e, ts)| ts.iter().map(move |t| g.canonical(EdgeId(e), t.clone())))
        .collect();
    points.sort();
    points.dedup();
    let images: Vec<Point> = (0..points.len())
        .map(|_| points[rng.gen_range(0..points.len())].clone())
        .collect();
    let image_of = |p: &Point| -> Point {
        let i = points.binary_search(p).expect("grid point");
        images[i].clone()
    };
    let mut pieces = Vec::new();
    for (e, ts) in grid.iter().enumerate() {
        for w in ts.windows(2) {
            let a = image_of(&g.canonical(EdgeId(e), w[0].clone()));
            let b = image_of(&g.canonical(EdgeId(e), w[1].clone()));
            pieces.push((
                EdgeId(e),
                Piece {
                    lo: w[0].clone(),
                    hi: w[1].clone(),
                    path: Path::geodesic(g, &a, &b),
                },
            ));
        }
    }
    let map = PLMap::new(graph.clone(), pieces)?;
    MarkovMap::new(map, grid)
}

/// The corpus member for `seed`.
pub fn map_for_seed(seed: u64, cfg: &RandomMapConfig) -> Result<MarkovMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_markov_map(&mut rng, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_respects_bounds_and_is_deterministic() {
        let cfg = RandomMapConfig::default();
        for seed in 0..50 {
            let mm = map_for_seed(seed, &cfg).unwrap();
            let g = mm.map().graph();
            assert!(g.is_tree());
            assert!((2..=6).contains(&g.endpoint_count()));
            assert!(mm.cells().len() <= 12);
            let again = map_for_seed(seed, &cfg).unwrap();
            assert_eq!(mm.map(), again.map());
        }
    }
}
