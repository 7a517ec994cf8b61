//! Unit-edge metric graphs.
//!
//! A [`Graph`] is a finite connected multigraph whose edges all have length
//! one. Points are addressed by `(edge, t)` with `t ∈ [0,1]` measured from the
//! edge's first endpoint; the distance between two points is the length of
//! the shortest path through the graph.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

/// Which end of an edge: `Start` is `t = 0`, `Finish` is `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeEnd {
    Start,
    Finish,
}

impl EdgeEnd {
    pub fn coordinate(self) -> Rational {
        match self {
            EdgeEnd::Start => rational::zero(),
            EdgeEnd::Finish => rational::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn vertex_at(&self, end: EdgeEnd) -> VertexId {
        match end {
            EdgeEnd::Start => self.u,
            EdgeEnd::Finish => self.v,
        }
    }
}

/// A point of the graph in canonical form.
///
/// Vertex points always sit on the lowest-numbered incident edge, so derived
/// equality and hashing coincide with equality of graph points. Build points
/// through [`Graph::point`] or [`Graph::vertex_point`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    edge: EdgeId,
    t: Rational,
}

impl Point {
    pub fn edge(&self) -> EdgeId {
        self.edge
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClassification {
    pub endpoints: BTreeSet<VertexId>,
    pub branching: BTreeSet<VertexId>,
}

#[derive(Debug, Clone)]
pub struct Graph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, EdgeId>,
    incidence: Vec<Vec<(EdgeId, EdgeEnd)>>,
    hops: Vec<Vec<u32>>,
    classification: VertexClassification,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_names == other.vertex_names && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from `(edge name, u, v)` triples. Vertices are created
    /// on first mention, in order of appearance.
    pub fn from_edges<I, S>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S, S)>,
        S: AsRef<str>,
    {
        let mut vertex_names: Vec<String> = Vec::new();
        let mut vertex_index: HashMap<String, VertexId> = HashMap::new();
        let mut intern = |name: &str| -> VertexId {
            if let Some(&id) = vertex_index.get(name) {
                return id;
            }
            let id = VertexId(vertex_names.len());
            vertex_names.push(name.to_string());
            vertex_index.insert(name.to_string(), id);
            id
        };
        let mut list = Vec::new();
        let mut edge_index = HashMap::new();
        for (name, u, v) in edges {
            let name = name.as_ref().to_string();
            if edge_index.contains_key(&name) {
                return Err(Error::DuplicateEdgeId(name));
            }
            let u = intern(u.as_ref());
            let v = intern(v.as_ref());
            edge_index.insert(name.clone(), EdgeId(list.len()));
            list.push(Edge { name, u, v });
        }
        if list.is_empty() {
            return Err(Error::EmptyGraph);
        }

        let mut incidence = vec![Vec::new(); vertex_names.len()];
        for (i, e) in list.iter().enumerate() {
            incidence[e.u.0].push((EdgeId(i), EdgeEnd::Start));
            incidence[e.v.0].push((EdgeId(i), EdgeEnd::Finish));
        }

        let hops = all_pairs_hops(vertex_names.len(), &list);
        if hops[0].contains(&u32::MAX) {
            return Err(Error::DisconnectedGraph);
        }

        let mut endpoints = BTreeSet::new();
        let mut branching = BTreeSet::new();
        for (v, inc) in incidence.iter().enumerate() {
            match inc.len() {
                1 => {
                    endpoints.insert(VertexId(v));
                }
                0 | 2 => {}
                _ => {
                    branching.insert(VertexId(v));
                }
            }
        }

        Ok(Graph {
            vertex_names,
            edges: list,
            edge_index,
            incidence,
            hops,
            classification: VertexClassification {
                endpoints,
                branching,
            },
        })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|n| n == name).map(VertexId)
    }

    /// Edge ends meeting at `v`; a loop contributes both of its ends.
    pub fn incident(&self, v: VertexId) -> &[(EdgeId, EdgeEnd)] {
        &self.incidence[v.0]
    }

    /// Combinatorial distance between vertices (number of edges).
    pub fn hops(&self, a: VertexId, b: VertexId) -> u32 {
        self.hops[a.0][b.0]
    }

    pub fn classification(&self) -> &VertexClassification {
        &self.classification
    }

    pub fn endpoint_count(&self) -> usize {
        self.classification.endpoints.len()
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertex_names.len()
    }

    /// Canonical point at `t` on `edge`.
    pub fn point(&self, edge: EdgeId, t: Rational) -> Result<Point> {
        if edge.0 >= self.edges.len() {
            return Err(Error::UnknownEdge(format!("#{}", edge.0)));
        }
        if t.is_negative() || t > rational::one() {
            return Err(Error::CoordinateOutOfRange(rational::format(&t)));
        }
        Ok(self.canonical(edge, t))
    }

    /// Same as [`Graph::point`] for coordinates already known to be in range.
    pub(crate) fn canonical(&self, edge: EdgeId, t: Rational) -> Point {
        match self.vertex_of(edge, &t) {
            Some(v) => self.vertex_point(v),
            None => Point { edge, t },
        }
    }

    pub fn vertex_point(&self, v: VertexId) -> Point {
        let &(edge, end) = self.incidence[v.0]
            .iter()
            .min_by_key(|(e, end)| (e.0, matches!(end, EdgeEnd::Finish)))
            .expect("every vertex has an incident edge");
        Point {
            edge,
            t: end.coordinate(),
        }
    }

    fn vertex_of(&self, edge: EdgeId, t: &Rational) -> Option<VertexId> {
        if t.is_zero() {
            Some(self.edges[edge.0].u)
        } else if t.is_one() {
            Some(self.edges[edge.0].v)
        } else {
            None
        }
    }

    /// The vertex a point sits on, if any.
    pub fn vertex_at(&self, p: &Point) -> Option<VertexId> {
        self.vertex_of(p.edge, &p.t)
    }

    pub fn valence(&self, p: &Point) -> usize {
        match self.vertex_at(p) {
            Some(v) => self.incidence[v.0].len(),
            None => 2,
        }
    }

    /// Cut point of a tree: any point that is not an endpoint.
    pub fn is_cut_point(&self, p: &Point) -> bool {
        self.is_tree() && self.valence(p) >= 2
    }

    /// Distances from a point at `t` on `edge` to the two ends of that edge.
    pub(crate) fn end_costs(&self, edge: EdgeId, t: &Rational) -> [(VertexId, Rational); 2] {
        let e = &self.edges[edge.0];
        [(e.u, t.clone()), (e.v, rational::one() - t)]
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Rational {
        self.distance_raw(x.edge, &x.t, y.edge, &y.t)
    }

    /// Shortest-path length between `(e1, t1)` and `(e2, t2)`; coordinates need
    /// not be canonical.
    pub(crate) fn distance_raw(
        &self,
        e1: EdgeId,
        t1: &Rational,
        e2: EdgeId,
        t2: &Rational,
    ) -> Rational {
        let mut best: Option<Rational> = None;
        if e1 == e2 {
            best = Some((t1 - t2).abs());
        }
        for (a, ca) in self.end_costs(e1, t1) {
            for (b, cb) in self.end_costs(e2, t2) {
                let d = &ca + &cb + Rational::from_integer(self.hops(a, b).into());
                if best.as_ref().is_none_or(|cur| d < *cur) {
                    best = Some(d);
                }
            }
        }
        best.expect("at least one route")
    }

    /// Distance from a vertex to a point given in raw coordinates.
    pub(crate) fn vertex_distance_raw(&self, w: VertexId, e: EdgeId, t: &Rational) -> Rational {
        self.end_costs(e, t)
            .into_iter()
            .map(|(b, cb)| cb + Rational::from_integer(self.hops(w, b).into()))
            .min()
            .expect("two ends")
    }

    /// `lcm{1, 2, ..., |End(T)|}`, the bound on periods of periodic subtrees
    /// that contain a fixed point.
    pub fn lcm_end_bound(&self) -> Result<BigUint> {
        if !self.is_tree() {
            return Err(Error::NotATree);
        }
        Ok(lcm_up_to(self.endpoint_count() as u64))
    }

    /// Number of connected components of the graph with `p` removed.
    pub fn split_components(&self, p: &Point) -> usize {
        let n = self.vertex_names.len();
        match self.vertex_at(p) {
            None => {
                let mut uf = UnionFind::new(n);
                for (i, e) in self.edges.iter().enumerate() {
                    if i != p.edge.0 {
                        uf.union(e.u.0, e.v.0);
                    }
                }
                uf.count()
            }
            Some(removed) => {
                // Nodes: all vertices, then one node per edge end at `removed`.
                let ends = &self.incidence[removed.0];
                let mut uf = UnionFind::new(n + ends.len());
                let end_node = |e: EdgeId, end: EdgeEnd| {
                    n + ends.iter().position(|&x| x == (e, end)).expect("incident end")
                };
                for (i, e) in self.edges.iter().enumerate() {
                    let id = EdgeId(i);
                    let a = if e.u == removed {
                        end_node(id, EdgeEnd::Start)
                    } else {
                        e.u.0
                    };
                    let b = if e.v == removed {
                        end_node(id, EdgeEnd::Finish)
                    } else {
                        e.v.0
                    };
                    uf.union(a, b);
                }
                // The removed vertex itself is not a node of the remainder.
                uf.count() - 1
            }
        }
    }

    /// Line-oriented description, one `edge <id> <u> <v>` per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {}\n",
                e.name,
                self.vertex_names[e.u.0],
                self.vertex_names[e.v.0]
            ));
        }
        out
    }

    pub fn display_point(&self, p: &Point) -> String {
        format!("{}@{}", self.edges[p.edge.0].name, rational::format(&p.t))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn lcm_up_to(n: u64) -> BigUint {
    (1..=n.max(1)).fold(BigUint::one(), |acc, k| acc.lcm(&BigUint::from(k)))
}

fn all_pairs_hops(n: usize, edges: &[Edge]) -> Vec<Vec<u32>> {
    let mut adjacency = vec![Vec::new(); n];
    for e in edges {
        adjacency[e.u.0].push(e.v.0);
        adjacency[e.v.0].push(e.u.0);
    }
    (0..n)
        .map(|source| {
            let mut dist = vec![u32::MAX; n];
            dist[source] = 0;
            let mut queue = VecDeque::from([source]);
            while let Some(x) = queue.pop_front() {
                for &y in &adjacency[x] {
                    if dist[y] == u32::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            dist
        })
        .collect()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Shorthand constructors for the graph families used across tests and builtins.
pub mod families {
    use super::Graph;

    /// Single edge `e0` from `v0` to `v1`.
    pub fn arc() -> Graph {
        Graph::from_edges([("e0", "v0", "v1")]).expect("arc")
    }

    /// `k` unit arms `a0..a{k-1}` from center `c`, oriented outward.
    pub fn star(k: usize) -> Graph {
        let names: Vec<(String, String, String)> = (0..k)
            .map(|i| (format!("a{i}"), "c".to_string(), format!("l{i}")))
            .collect();
        Graph::from_edges(names).expect("star")
    }

    /// One loop `e0` at vertex `v0`.
    pub fn circle() -> Graph {
        Graph::from_edges([("e0", "v0", "v0")]).expect("circle")
    }

    /// Path of `n` edges `e0..e{n-1}` through vertices `v0..v{n}`.
    pub fn path(n: usize) -> Graph {
        let names: Vec<(String, String, String)> = (0..n)
            .map(|i| (format!("e{i}"), format!("v{i}"), format!("v{}", i + 1)))
            .collect();
        Graph::from_edges(names).expect("path")
    }

    /// Figure-eight: two loops at one vertex.
    pub fn figure_eight() -> Graph {
        Graph::from_edges([("e0", "v0", "v0"), ("e1", "v0", "v0")]).expect("figure eight")
    }

    /// Triangle cycle subdivided into three unit edges with a pendant arc.
    pub fn lollipop() -> Graph {
        Graph::from_edges([
            ("e0", "v0", "v1"),
            ("e1", "v1", "v2"),
            ("e2", "v2", "v0"),
            ("e3", "v0", "v3"),
        ])
        .expect("lollipop")
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn arc_star_and_loop_classification() {
        let g = arc();
        assert_eq!(g.endpoint_count(), 2);
        assert!(g.classification().branching.is_empty());

        let s = star(4);
        assert_eq!(s.endpoint_count(), 4);
        let c = s.vertex_by_name("c").unwrap();
        assert_eq!(s.classification().branching, BTreeSet::from([c]));

        let o = circle();
        assert_eq!(o.endpoint_count(), 0);
        assert!(o.classification().branching.is_empty());
        assert!(!o.is_tree());
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            Graph::from_edges([("e", "a", "b"), ("e", "b", "c")]).unwrap_err(),
            Error::DuplicateEdgeId("e".into())
        );
        assert_eq!(
            Graph::from_edges([("e", "a", "b"), ("f", "c", "d")]).unwrap_err(),
            Error::DisconnectedGraph
        );
        let empty: [(&str, &str, &str); 0] = [];
        assert_eq!(Graph::from_edges(empty).unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn valence_examples() {
        let s = star(4);
        let center = s.vertex_point(s.vertex_by_name("c").unwrap());
        assert_eq!(s.valence(&center), 4);

        let g = arc();
        assert_eq!(g.valence(&g.point(EdgeId(0), ratio(1, 2)).unwrap()), 2);
        assert_eq!(g.valence(&g.point(EdgeId(0), int(0)).unwrap()), 1);

        let o = circle();
        assert_eq!(o.valence(&o.point(EdgeId(0), ratio(1, 3)).unwrap()), 2);
        assert_eq!(o.valence(&o.point(EdgeId(0), int(1)).unwrap()), 2);
    }

    #[test]
    fn vertex_points_are_canonical() {
        let s = star(3);
        let a = s.point(EdgeId(2), int(0)).unwrap();
        let b = s.point(EdgeId(0), int(0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edge(), EdgeId(0));

        let o = circle();
        assert_eq!(o.point(EdgeId(0), int(0)).unwrap(), o.point(EdgeId(0), int(1)).unwrap());
    }

    #[test]
    fn coordinate_range_is_checked() {
        let g = arc();
        assert!(g.point(EdgeId(0), ratio(3, 2)).is_err());
        assert!(g.point(EdgeId(0), ratio(-1, 2)).is_err());
        assert!(g.point(EdgeId(1), ratio(1, 2)).is_err());
    }

    #[test]
    fn distance_examples() {
        let s = star(4);
        let x = s.point(EdgeId(0), ratio(1, 2)).unwrap();
        let y = s.point(EdgeId(1), ratio(1, 2)).unwrap();
        assert_eq!(s.distance(&x, &x), int(0));
        // Path through the center: 1/2 + 1/2.
        assert_eq!(s.distance(&x, &y), int(1));

        let o = circle();
        let p = o.point(EdgeId(0), ratio(1, 4)).unwrap();
        let q = o.point(EdgeId(0), ratio(3, 4)).unwrap();
        assert_eq!(o.distance(&p, &q), ratio(1, 2));
        let r = o.point(EdgeId(0), ratio(9, 10)).unwrap();
        assert_eq!(o.distance(&p, &r), ratio(7, 20));
    }

    #[test]
    fn lcm_bound_examples() {
        assert_eq!(arc().lcm_end_bound().unwrap(), BigUint::from(2u32));
        assert_eq!(star(3).lcm_end_bound().unwrap(), BigUint::from(6u32));
        assert_eq!(star(14).lcm_end_bound().unwrap(), BigUint::from(360360u32));
        assert_eq!(circle().lcm_end_bound().unwrap_err(), Error::NotATree);
        assert_eq!(lcm_up_to(0), BigUint::one());
        assert_eq!(lcm_up_to(1), BigUint::one());
    }

    #[test]
    fn lcm_matches_brute_force() {
        // Smallest positive integer divisible by every k <= n, found by search.
        for n in 1..=9u64 {
            let brute = (1u64..)
                .find(|m| (1..=n).all(|k| m % k == 0))
                .unwrap();
            assert_eq!(lcm_up_to(n), BigUint::from(brute));
        }
    }

    #[test]
    fn tree_cut_points_disconnect() {
        let g = Graph::from_edges([
            ("e0", "a", "b"),
            ("e1", "b", "c"),
            ("e2", "b", "d"),
            ("e3", "d", "e"),
        ])
        .unwrap();
        for v in g.vertex_ids() {
            let p = g.vertex_point(v);
            assert_eq!(g.split_components(&p), g.valence(&p));
            assert_eq!(g.is_cut_point(&p), g.valence(&p) >= 2);
        }
        for e in g.edge_ids() {
            let p = g.point(e, ratio(1, 3)).unwrap();
            assert_eq!(g.split_components(&p), 2);
        }
    }

    #[test]
    fn loops_do_not_disconnect() {
        let g = lollipop();
        let p = g.point(EdgeId(1), ratio(1, 2)).unwrap();
        assert_eq!(g.split_components(&p), 1);
        let v0 = g.vertex_point(g.vertex_by_name("v0").unwrap());
        assert_eq!(g.split_components(&v0), 2);
        let o = figure_eight();
        let center = o.vertex_point(VertexId(0));
        assert_eq!(o.valence(&center), 4);
        assert_eq!(o.split_components(&center), 2);
    }
}
