//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::VecDeque;

use hyperdyn_core::{Continuum, Graph, Rational};
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Breadth-first distances on the graph with every edge cut into `n` unit
/// steps. Distances are in steps, so divide by `n` for lengths.
pub struct GridOracle {
    n: i64,
    vertices: usize,
    adj: Vec<Vec<usize>>,
    edge_ends: Vec<(usize, usize)>,
}

impl GridOracle {
    pub fn new(g: &Graph, n: i64) -> Self {
        let vertices = g.vertex_count();
        let per_edge = (n - 1) as usize;
        let total = vertices + g.edge_count() * per_edge;
        let mut adj = vec![Vec::new(); total];
        let mut edge_ends = Vec::new();
        for (e, edge) in g.edges().iter().enumerate() {
            let (u, v) = (edge.u.0, edge.v.0);
            edge_ends.push((u, v));
            let mut prev = u;
            for k in 0..per_edge {
                let node = vertices + e * per_edge + k;
                adj[prev].push(node);
                adj[node].push(prev);
                prev = node;
            }
            adj[prev].push(v);
            adj[v].push(prev);
        }
        GridOracle {
            n,
            vertices,
            adj,
            edge_ends,
        }
    }

    fn node(&self, e: usize, k: i64) -> usize {
        if k == 0 {
            self.edge_ends[e].0
        } else if k == self.n {
            self.edge_ends[e].1
        } else {
            self.vertices + e * (self.n - 1) as usize + (k - 1) as usize
        }
    }

    fn scaled(&self, t: &Rational) -> Rational {
        t * Rational::from_integer(self.n.into())
    }

    /// Grid nodes inside `a` plus the nodes nearest to its interval ends.
    pub fn nodes(&self, a: &Continuum) -> Vec<usize> {
        let mut out = Vec::new();
        for (e, iv) in a.parts() {
            let lo = self.scaled(iv.lo());
            let hi = self.scaled(iv.hi());
            let first = lo.ceil().to_integer().to_i64().unwrap();
            let last = hi.floor().to_integer().to_i64().unwrap();
            for k in first..=last {
                out.push(self.node(e.0, k));
            }
            out.push(self.node(e.0, lo.round().to_integer().to_i64().unwrap()));
            out.push(self.node(e.0, hi.round().to_integer().to_i64().unwrap()));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn distances_from(&self, sources: &[usize]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Hausdorff distance between the sampled node sets, in edge lengths.
    pub fn hausdorff(&self, a: &Continuum, b: &Continuum) -> f64 {
        let na = self.nodes(a);
        let nb = self.nodes(b);
        let from_a = self.distances_from(&na);
        let from_b = self.distances_from(&nb);
        let ab = na.iter().map(|&x| from_b[x]).max().unwrap();
        let ba = nb.iter().map(|&x| from_a[x]).max().unwrap();
        ab.max(ba) as f64 / self.n as f64
    }
}

/// `lcm{1, …, n}` by repeated lcm on machine integers.
pub fn lcm_naive(n: u64) -> u64 {
    (1..=n).fold(1u64, |acc, k| acc.lcm(&k))
}
