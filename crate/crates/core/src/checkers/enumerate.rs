//! Finite state graph of the induced map on aligned continua of a Markov map.
//!
//! Aligned continua are grid points and connected unions of grid cells. The
//! Markov property makes this family invariant, so `f̃` restricts to a
//! function on a finite set and periodic members are exactly its cycles.
//! Isolated periodic points of low period are added as extra states.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::hyperspace::Continuum;
use crate::pl_map::markov::MarkovMap;
use crate::pl_map::DEFAULT_PIECE_CAP;

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    /// Most connected cell unions generated before giving up.
    pub subtree_cap: usize,
    /// Isolated periodic points are searched among fixed points of
    /// `f^p` for `p` up to this bound.
    pub point_period_cap: usize,
    pub piece_cap: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            subtree_cap: 200_000,
            point_period_cap: 4,
            piece_cap: DEFAULT_PIECE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PeriodicSubtree {
    pub period: usize,
    pub continuum: Continuum,
}

#[derive(Debug, Clone)]
pub struct StateGraph {
    pub states: Vec<Continuum>,
    /// `next[i]` indexes `f̃(states[i])`.
    pub next: Vec<usize>,
    /// Exact period of states lying on a cycle.
    pub period: Vec<Option<usize>>,
}

/// Every connected union of cells, as bitmasks over the cell list.
fn connected_cell_sets(mm: &MarkovMap, cap: usize) -> Result<Vec<u128>> {
    let cells = mm.cells();
    if cells.len() > 128 {
        return Err(Error::CombinatorialBlowup {
            count: cells.len(),
            cap: 128,
        });
    }
    let conts: Vec<Continuum> = (0..cells.len()).map(|i| mm.cell_continuum(i)).collect();
    let mut adj = vec![0u128; cells.len()];
    for i in 0..cells.len() {
        for j in 0..i {
            if conts[i].intersects(&conts[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let mut seen: HashSet<u128> = HashSet::new();
    let mut stack: Vec<u128> = (0..cells.len()).map(|i| 1u128 << i).collect();
    while let Some(mask) = stack.pop() {
        if !seen.insert(mask) {
            continue;
        }
        if seen.len() > cap {
            return Err(Error::CombinatorialBlowup {
                count: seen.len(),
                cap,
            });
        }
        let mut border = 0u128;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            border |= adj[i];
            rest &= rest - 1;
        }
        border &= !mask;
        while border != 0 {
            let i = border.trailing_zeros();
            border &= border - 1;
            let grown = mask | (1 << i);
            if !seen.contains(&grown) {
                stack.push(grown);
            }
        }
    }
    let mut out: Vec<u128> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

impl StateGraph {
    pub fn build(mm: &MarkovMap, opts: &EnumerateOptions) -> Result<Self> {
        let f = mm.map();
        let g = f.graph();
        let mut states: Vec<Continuum> = Vec::new();
        for p in mm.grid_points() {
            states.push(Continuum::point(g, &p));
        }
        for mask in connected_cell_sets(mm, opts.subtree_cap)? {
            let mut items = Vec::new();
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let c = &mm.cells()[i];
                items.push((
                    c.edge,
                    crate::hyperspace::Interval::new(c.lo.clone(), c.hi.clone())?,
                ));
            }
            states.push(Continuum::from_parts(g, items)?);
        }
        for p in 1..=opts.point_period_cap {
            let power = match f.compose_power(p, opts.piece_cap) {
                Ok(h) => h,
                Err(Error::PieceExplosion { .. }) => break,
                Err(e) => return Err(e),
            };
            for x in power.fixed_points().points {
                states.push(Continuum::point(g, &x));
            }
        }
        let mut index: HashMap<Continuum, usize> = HashMap::new();
        let mut unique = Vec::with_capacity(states.len());
        for s in states {
            if !index.contains_key(&s) {
                index.insert(s.clone(), unique.len());
                unique.push(s);
            }
        }
        let mut states = unique;
        let mut next = Vec::with_capacity(states.len());
        let mut i = 0;
        while i < states.len() {
            let image = f.image_continuum(&states[i]);
            let j = match index.get(&image) {
                Some(&j) => j,
                None => {
                    index.insert(image.clone(), states.len());
                    states.push(image);
                    states.len() - 1
                }
            };
            next.push(j);
            i += 1;
        }
        let period = cycle_periods(&next);
        Ok(StateGraph {
            states,
            next,
            period,
        })
    }

    pub fn periodic(&self) -> Vec<PeriodicSubtree> {
        let mut out: Vec<PeriodicSubtree> = self
            .states
            .iter()
            .zip(&self.period)
            .filter_map(|(c, p)| {
                p.map(|period| PeriodicSubtree {
                    period,
                    continuum: c.clone(),
                })
            })
            .collect();
        out.sort();
        out
    }
}

/// Cycle lengths of a functional graph, `None` off the cycles.
fn cycle_periods(next: &[usize]) -> Vec<Option<usize>> {
    let n = next.len();
    let mut period = vec![None; n];
    // 0 unvisited, 1 on the current walk, 2 finished.
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            walk.push(x);
            x = next[x];
        }
        if state[x] == 1 {
            let pos = walk.iter().position(|&w| w == x).expect("on walk");
            let len = walk.len() - pos;
            for &w in &walk[pos..] {
                period[w] = Some(len);
            }
        }
        for &w in &walk {
            state[w] = 2;
        }
    }
    period
}

/// Periodic aligned continua and low-period isolated periodic points,
/// sorted by period then continuum.
pub fn enumerate_periodic_subtrees(mm: &MarkovMap, opts: &EnumerateOptions) -> Result<Vec<PeriodicSubtree>> {
    Ok(StateGraph::build(mm, opts)?.periodic())
}
