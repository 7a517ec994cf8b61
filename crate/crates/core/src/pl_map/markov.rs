//! Markov partitions: a forward-invariant grid of points on every edge such
//! that each grid cell maps onto a union of whole cells (or onto a grid point).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hyperspace::{Continuum, Interval};
use crate::metric_graph::{EdgeId, Point};
use crate::pl_map::PLMap;
use crate::rational::{self, Rational};

/// One grid cell `[lo, hi]` of an edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub edge: EdgeId,
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Debug, Clone)]
pub struct MarkovMap {
    map: PLMap,
    grid: Vec<Vec<Rational>>,
    cells: Vec<Cell>,
}

impl MarkovMap {
    /// Attaches an explicit grid (one sorted coordinate list per edge) and
    /// validates invariance and the cell-covering property.
    pub fn new(map: PLMap, grid: Vec<Vec<Rational>>) -> Result<Self> {
        let graph = map.graph_arc().clone();
        let g = &*graph;
        if grid.len() != g.edge_count() {
            return Err(Error::NotMarkov(format!(
                "grid lists {} edges, graph has {}",
                grid.len(),
                g.edge_count()
            )));
        }
        let mut clean = Vec::with_capacity(grid.len());
        for (i, ts) in grid.into_iter().enumerate() {
            let e = EdgeId(i);
            let mut set: BTreeSet<Rational> = ts.into_iter().collect();
            set.insert(rational::zero());
            set.insert(rational::one());
            if let Some(bad) = set.iter().find(|t| **t < rational::zero() || **t > rational::one()) {
                return Err(Error::CoordinateOutOfRange(rational::format(bad)));
            }
            for b in map.breakpoints(e) {
                if !set.contains(&b) {
                    return Err(Error::NotMarkov(format!(
                        "breakpoint {} of {} is not a grid point",
                        rational::format(&b),
                        g.edge(e).name
                    )));
                }
            }
            clean.push(set.into_iter().collect::<Vec<_>>());
        }
        let cells = clean
            .iter()
            .enumerate()
            .flat_map(|(i, ts)| {
                ts.windows(2).map(move |w| Cell {
                    edge: EdgeId(i),
                    lo: w[0].clone(),
                    hi: w[1].clone(),
                })
            })
            .collect();
        let mm = MarkovMap {
            map,
            grid: clean,
            cells,
        };
        for p in mm.grid_points() {
            let q = mm.map.evaluate(&p);
            if !mm.is_grid_point(&q) {
                return Err(Error::NotMarkov(format!(
                    "{} maps off the grid to {}",
                    g.display_point(&p),
                    g.display_point(&q)
                )));
            }
        }
        for i in 0..mm.cells.len() {
            let image = mm.map.image_continuum(&mm.cell_continuum(i));
            if !mm.is_aligned(&image) {
                return Err(Error::NotMarkov(format!(
                    "image of cell {} is not a union of cells",
                    mm.describe_cell(i)
                )));
            }
        }
        Ok(mm)
    }

    /// Builds the coarsest grid containing all breakpoints and path turning
    /// points that is closed under the map, giving up after `rounds` passes.
    pub fn close(map: PLMap, rounds: usize) -> Result<Self> {
        let g = map.graph().clone();
        let mut grid: Vec<BTreeSet<Rational>> = g
            .edge_ids()
            .map(|e| map.breakpoints(e).into_iter().collect())
            .collect();
        for e in g.edge_ids() {
            for piece in map.pieces(e) {
                for seg in piece.path.segments() {
                    grid[seg.edge.0].insert(seg.from.clone());
                    grid[seg.edge.0].insert(seg.to.clone());
                }
            }
        }
        let mut frontier: Vec<Point> = grid
            .iter()
            .enumerate()
            .flat_map(|(i, ts)| {
                let g = &g;
                ts.iter().map(move |t| g.canonical(EdgeId(i), t.clone()))
            })
            .collect();
        let mut closed = false;
        for _ in 0..rounds {
            let mut next = Vec::new();
            for p in &frontier {
                let q = map.evaluate(p);
                if grid[q.edge().0].insert(q.t().clone()) {
                    next.push(q);
                }
            }
            if next.is_empty() {
                closed = true;
                break;
            }
            frontier = next;
        }
        if !closed {
            return Err(Error::NotMarkov(format!(
                "grid not forward-closed after {rounds} rounds"
            )));
        }
        MarkovMap::new(map, grid.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    pub fn map(&self) -> &PLMap {
        &self.map
    }

    pub fn grid(&self, e: EdgeId) -> &[Rational] {
        &self.grid[e.0]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Distinct grid points in canonical form.
    pub fn grid_points(&self) -> Vec<Point> {
        let g = self.map.graph();
        let mut pts: Vec<Point> = self
            .grid
            .iter()
            .enumerate()
            .flat_map(|(i, ts)| ts.iter().map(move |t| g.canonical(EdgeId(i), t.clone())))
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn is_grid_point(&self, p: &Point) -> bool {
        self.grid[p.edge().0].binary_search(p.t()).is_ok()
    }

    pub fn cell_continuum(&self, i: usize) -> Continuum {
        let c = &self.cells[i];
        Continuum::segment(self.map.graph(), c.edge, c.lo.clone(), c.hi.clone())
            .expect("cells are valid segments")
    }

    /// Whether every interval endpoint of `a` is a grid coordinate.
    pub fn is_aligned(&self, a: &Continuum) -> bool {
        a.parts().all(|(e, iv): (EdgeId, &Interval)| {
            let ts = &self.grid[e.0];
            ts.binary_search(iv.lo()).is_ok() && ts.binary_search(iv.hi()).is_ok()
        })
    }

    /// Cells whose interiors the image of cell `i` covers.
    pub fn transitions(&self, i: usize) -> Vec<usize> {
        let image = self.map.image_continuum(&self.cell_continuum(i));
        (0..self.cells.len())
            .filter(|&j| {
                let c = &self.cells[j];
                image
                    .on_edge(c.edge)
                    .iter()
                    .any(|iv| iv.lo() <= &c.lo && &c.hi <= iv.hi())
            })
            .collect()
    }

    pub fn describe_cell(&self, i: usize) -> String {
        let c = &self.cells[i];
        format!(
            "{}:[{},{}]",
            self.map.graph().edge(c.edge).name,
            rational::format(&c.lo),
            rational::format(&c.hi)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{int, ratio};

    #[test]
    fn tent_grid_and_transitions() {
        let mm = MarkovMap::close(catalog::tent(), 10).unwrap();
        assert_eq!(mm.grid(EdgeId(0)), &[int(0), ratio(1, 2), int(1)]);
        assert_eq!(mm.transitions(0), vec![0, 1]);
        assert_eq!(mm.transitions(1), vec![0, 1]);
    }

    #[test]
    fn truncated_tent_plateau_cell_has_no_transitions() {
        let mm = MarkovMap::close(catalog::truncated_tent(int(3)).unwrap(), 10).unwrap();
        assert_eq!(mm.cells().len(), 3);
        assert!(mm.transitions(1).is_empty());
    }

    #[test]
    fn non_invariant_grid_is_rejected() {
        let f = catalog::tent();
        // 1/3 ↦ 2/3 which is missing from the grid.
        let bad = MarkovMap::new(f.clone(), vec![vec![int(0), ratio(1, 3), ratio(1, 2), int(1)]]);
        assert!(matches!(bad, Err(Error::NotMarkov(_))));
        let missing_breakpoint = MarkovMap::new(f, vec![vec![int(0), int(1)]]);
        assert!(matches!(missing_breakpoint, Err(Error::NotMarkov(_))));
    }

    #[test]
    fn orbits_with_growing_denominators_do_not_close() {
        // Slope ±3/2: the orbit 1/2, 3/4, 3/8, 9/16, ... never repeats.
        let g = std::sync::Arc::new(crate::metric_graph::families::arc());
        let f = crate::pl_map::interval_map(
            g,
            &[(int(0), int(0)), (ratio(1, 2), ratio(3, 4)), (int(1), int(0))],
        )
        .unwrap();
        assert!(MarkovMap::close(f, 8).is_err());
    }
}
