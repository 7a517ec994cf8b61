//! Continuous piecewise-linear self-maps of a unit-edge graph.
//!
//! Each edge is cut into pieces by rational breakpoints; a piece is mapped at
//! constant speed along an image [`Path`] of directed edge segments. A path
//! of length zero encodes a plateau.

pub mod collapse;
pub mod markov;

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::hyperspace::{Continuum, Interval};
use crate::metric_graph::{EdgeId, Graph, Point};
use crate::rational::{self, Rational};

/// Default cap on the number of pieces a materialized power may have.
pub const DEFAULT_PIECE_CAP: usize = 100_000;

/// A directed stretch of one edge, from coordinate `from` to `to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub edge: EdgeId,
    pub from: Rational,
    pub to: Rational,
}

impl Segment {
    pub fn new(edge: EdgeId, from: Rational, to: Rational) -> Self {
        Segment { edge, from, to }
    }

    pub fn length(&self) -> Rational {
        (&self.to - &self.from).abs()
    }

    fn at(&self, offset: &Rational) -> Rational {
        if self.to >= self.from {
            &self.from + offset
        } else {
            &self.from - offset
        }
    }

    fn reversed(&self) -> Segment {
        Segment {
            edge: self.edge,
            from: self.to.clone(),
            to: self.from.clone(),
        }
    }
}

/// A path through the graph made of consecutive segments. A single
/// zero-length segment is a constant path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    segments: Vec<Segment>,
}

impl Path {
    pub fn new(g: &Graph, segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidMap("empty image path".into()));
        }
        for s in &segments {
            if s.edge.0 >= g.edge_count() {
                return Err(Error::UnknownEdge(format!("#{}", s.edge.0)));
            }
            for t in [&s.from, &s.to] {
                if t.is_negative() || *t > rational::one() {
                    return Err(Error::CoordinateOutOfRange(rational::format(t)));
                }
            }
        }
        for pair in segments.windows(2) {
            let end = g.canonical(pair[0].edge, pair[0].to.clone());
            let start = g.canonical(pair[1].edge, pair[1].from.clone());
            if end != start {
                return Err(Error::InvalidMap(format!(
                    "path jumps from {} to {}",
                    g.display_point(&end),
                    g.display_point(&start)
                )));
            }
        }
        let moving: Vec<Segment> = segments
            .iter()
            .filter(|s| !s.length().is_zero())
            .cloned()
            .collect();
        if moving.is_empty() {
            return Ok(Path {
                segments: vec![segments[0].clone()],
            });
        }
        Ok(Path { segments: moving })
    }

    pub fn constant(p: &Point) -> Self {
        Path {
            segments: vec![Segment::new(p.edge(), p.t().clone(), p.t().clone())],
        }
    }

    /// A shortest path from `p` to `q`.
    pub fn geodesic(g: &Graph, p: &Point, q: &Point) -> Self {
        if p == q {
            return Path::constant(p);
        }
        let target = g.distance(p, q);
        if p.edge() == q.edge() && (p.t() - q.t()).abs() == target {
            return Path {
                segments: vec![Segment::new(p.edge(), p.t().clone(), q.t().clone())],
            };
        }
        let starts = g.end_costs(p.edge(), p.t());
        let ends = g.end_costs(q.edge(), q.t());
        for (i, (a, ca)) in starts.iter().enumerate() {
            for (j, (b, cb)) in ends.iter().enumerate() {
                let hops = g.hops(*a, *b);
                if ca + cb + Rational::from_integer(hops.into()) != target {
                    continue;
                }
                let mut segs = vec![Segment::new(
                    p.edge(),
                    p.t().clone(),
                    if i == 0 { rational::zero() } else { rational::one() },
                )];
                let mut cur = *a;
                while cur != *b {
                    let &(e, end) = g
                        .incident(cur)
                        .iter()
                        .find(|(e, end)| {
                            let edge = g.edge(*e);
                            let other = match end {
                                crate::metric_graph::EdgeEnd::Start => edge.v,
                                crate::metric_graph::EdgeEnd::Finish => edge.u,
                            };
                            g.hops(other, *b) + 1 == g.hops(cur, *b)
                        })
                        .expect("a shortest-path step exists");
                    let edge = g.edge(e);
                    match end {
                        crate::metric_graph::EdgeEnd::Start => {
                            segs.push(Segment::new(e, rational::zero(), rational::one()));
                            cur = edge.v;
                        }
                        crate::metric_graph::EdgeEnd::Finish => {
                            segs.push(Segment::new(e, rational::one(), rational::zero()));
                            cur = edge.u;
                        }
                    }
                }
                segs.push(Segment::new(
                    q.edge(),
                    if j == 0 { rational::zero() } else { rational::one() },
                    q.t().clone(),
                ));
                return Path::new(g, segs).expect("geodesic is a valid path");
            }
        }
        unreachable!("some route realizes the distance")
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn length(&self) -> Rational {
        self.segments
            .iter()
            .fold(rational::zero(), |acc, s| acc + s.length())
    }

    pub fn is_constant(&self) -> bool {
        self.segments.len() == 1 && self.segments[0].length().is_zero()
    }

    pub fn start(&self, g: &Graph) -> Point {
        let s = &self.segments[0];
        g.canonical(s.edge, s.from.clone())
    }

    pub fn end(&self, g: &Graph) -> Point {
        let s = self.segments.last().expect("nonempty");
        g.canonical(s.edge, s.to.clone())
    }

    /// Point at arc-length `s` from the start (clamped to the path).
    pub fn locate(&self, g: &Graph, s: &Rational) -> Point {
        let mut offset = rational::zero();
        for seg in &self.segments {
            let len = seg.length();
            if s <= &(&offset + &len) {
                let local = if s < &offset {
                    rational::zero()
                } else {
                    s - &offset
                };
                return g.canonical(seg.edge, seg.at(&local));
            }
            offset += len;
        }
        self.end(g)
    }

    /// The stretch between arc positions `s0 ≤ s1`, as a path.
    pub fn sub_path(&self, g: &Graph, s0: &Rational, s1: &Rational) -> Path {
        debug_assert!(s0 <= s1);
        if s0 == s1 {
            return Path::constant(&self.locate(g, s0));
        }
        let mut out = Vec::new();
        let mut offset = rational::zero();
        for seg in &self.segments {
            let len = seg.length();
            let seg_end = &offset + &len;
            let a = rational::max(s0, &offset);
            let b = rational::min(s1, &seg_end);
            if a < b {
                out.push(Segment::new(seg.edge, seg.at(&(&a - &offset)), seg.at(&(&b - &offset))));
            }
            offset = seg_end;
        }
        Path { segments: out }
    }

    pub fn reversed(&self) -> Path {
        Path {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    /// Edge intervals swept between arc positions `s0 ≤ s1`.
    pub fn cover(&self, g: &Graph, s0: &Rational, s1: &Rational) -> Vec<(EdgeId, Interval)> {
        if s0 == s1 {
            let p = self.locate(g, s0);
            return vec![(p.edge(), Interval::point(p.t().clone()).expect("in range"))];
        }
        self.sub_path(g, s0, s1)
            .segments
            .iter()
            .map(|seg| {
                let lo = rational::min(&seg.from, &seg.to);
                let hi = rational::max(&seg.from, &seg.to);
                (seg.edge, Interval::new(lo, hi).expect("segment within edge"))
            })
            .collect()
    }

    /// `self` followed by `next`; joins collinear segments at the seam.
    fn concat(&self, next: &Path) -> Path {
        if self.is_constant() {
            return next.clone();
        }
        if next.is_constant() {
            return self.clone();
        }
        let mut segments = self.segments.clone();
        let mut rest = next.segments.iter();
        if let Some(first) = rest.next() {
            let last = segments.last_mut().expect("nonempty");
            let same_direction = (last.to > last.from) == (first.to > first.from);
            if last.edge == first.edge && last.to == first.from && same_direction {
                last.to = first.to.clone();
            } else {
                segments.push(first.clone());
            }
        }
        segments.extend(rest.cloned());
        Path { segments }
    }

    fn display(&self, g: &Graph) -> String {
        self.segments
            .iter()
            .map(|s| {
                format!(
                    "{}[{}..{}]",
                    g.edge(s.edge).name,
                    rational::format(&s.from),
                    rational::format(&s.to)
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// One linear piece: `[lo, hi]` of its edge traversing `path` at constant speed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub path: Path,
}

impl Piece {
    /// Arc position along the image path reached at coordinate `t`.
    fn position(&self, t: &Rational) -> Rational {
        let len = self.path.length();
        if len.is_zero() {
            return len;
        }
        (t - &self.lo) / (&self.hi - &self.lo) * len
    }

    fn speed(&self) -> Rational {
        self.path.length() / (&self.hi - &self.lo)
    }
}

/// Isolated fixed points plus maximal edge segments of pointwise-fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointSet {
    pub points: Vec<Point>,
    pub segments: Vec<(EdgeId, Interval)>,
}

impl FixedPointSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.segments.is_empty()
    }

    /// Whether `a` contains at least one fixed point.
    pub fn meets(&self, a: &Continuum) -> bool {
        self.points.iter().any(|p| a.contains_point(p))
            || self
                .segments
                .iter()
                .any(|(e, iv)| a.on_edge(*e).iter().any(|j| j.meets(iv)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    graph: Arc<Graph>,
    pieces: Vec<Vec<Piece>>,
}

impl PLMap {
    /// Validates coverage of every edge, well-formed paths, and continuity at
    /// breakpoints and vertices.
    pub fn new(graph: Arc<Graph>, pieces: Vec<(EdgeId, Piece)>) -> Result<Self> {
        let g = &*graph;
        let mut per_edge: Vec<Vec<Piece>> = vec![Vec::new(); g.edge_count()];
        for (e, piece) in pieces {
            if e.0 >= g.edge_count() {
                return Err(Error::UnknownEdge(format!("#{}", e.0)));
            }
            per_edge[e.0].push(piece);
        }
        for (e, list) in per_edge.iter_mut().enumerate() {
            let name = &g.edge(EdgeId(e)).name;
            if list.is_empty() {
                return Err(Error::InvalidMap(format!("edge {name} has no pieces")));
            }
            list.sort_by(|a, b| a.lo.cmp(&b.lo));
            if !list[0].lo.is_zero() || list.last().expect("nonempty").hi != rational::one() {
                return Err(Error::InvalidMap(format!("pieces of {name} do not cover [0,1]")));
            }
            for piece in list.iter() {
                if piece.lo >= piece.hi {
                    return Err(Error::InvalidMap(format!("empty piece on {name}")));
                }
            }
            for pair in list.windows(2) {
                if pair[0].hi != pair[1].lo {
                    return Err(Error::InvalidMap(format!(
                        "pieces of {name} leave a gap or overlap at {}",
                        rational::format(&pair[0].hi)
                    )));
                }
                let left = pair[0].path.end(g);
                let right = pair[1].path.start(g);
                if left != right {
                    return Err(Error::Discontinuity(format!(
                        "{name} at {}: {} vs {}",
                        rational::format(&pair[0].hi),
                        g.display_point(&left),
                        g.display_point(&right)
                    )));
                }
            }
        }
        let map = PLMap {
            graph,
            pieces: per_edge,
        };
        for v in map.graph.vertex_ids() {
            let mut images = map.graph.incident(v).iter().map(|&(e, end)| {
                let list = &map.pieces[e.0];
                match end {
                    crate::metric_graph::EdgeEnd::Start => list[0].path.start(&map.graph),
                    crate::metric_graph::EdgeEnd::Finish => {
                        list.last().expect("nonempty").path.end(&map.graph)
                    }
                }
            });
            let first = images.next().expect("vertex has incident edges");
            if let Some(other) = images.find(|p| *p != first) {
                return Err(Error::Discontinuity(format!(
                    "vertex {}: {} vs {}",
                    map.graph.vertex_name(v),
                    map.graph.display_point(&first),
                    map.graph.display_point(&other)
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(graph: Arc<Graph>) -> Self {
        let pieces = graph
            .edge_ids()
            .map(|e| {
                (
                    e,
                    Piece {
                        lo: rational::zero(),
                        hi: rational::one(),
                        path: Path {
                            segments: vec![Segment::new(e, rational::zero(), rational::one())],
                        },
                    },
                )
            })
            .collect();
        PLMap::new(graph, pieces).expect("identity is continuous")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn pieces(&self, e: EdgeId) -> &[Piece] {
        &self.pieces[e.0]
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.iter().map(Vec::len).sum()
    }

    /// Number of pieces on which the map is affine in edge coordinates: one
    /// per image segment.
    pub fn linear_piece_count(&self) -> usize {
        self.pieces
            .iter()
            .flatten()
            .map(|p| p.path.segments.len())
            .sum()
    }

    /// Breakpoints of one edge, including 0 and 1.
    pub fn breakpoints(&self, e: EdgeId) -> Vec<Rational> {
        let list = &self.pieces[e.0];
        let mut out: Vec<Rational> = list.iter().map(|p| p.lo.clone()).collect();
        out.push(rational::one());
        out
    }

    fn piece_at(&self, e: EdgeId, t: &Rational) -> &Piece {
        let list = &self.pieces[e.0];
        let idx = list.partition_point(|p| &p.hi < t);
        &list[idx.min(list.len() - 1)]
    }

    pub fn evaluate(&self, x: &Point) -> Point {
        let piece = self.piece_at(x.edge(), x.t());
        piece.path.locate(&self.graph, &piece.position(x.t()))
    }

    /// `f(A)`.
    pub fn image_continuum(&self, a: &Continuum) -> Continuum {
        let g = &*self.graph;
        let mut items = Vec::new();
        for (e, iv) in a.parts() {
            for piece in &self.pieces[e.0] {
                if piece.hi < *iv.lo() || piece.lo > *iv.hi() {
                    continue;
                }
                let lo = rational::max(&piece.lo, iv.lo());
                let hi = rational::min(&piece.hi, iv.hi());
                let s0 = piece.position(&lo);
                let s1 = piece.position(&hi);
                items.extend(piece.path.cover(g, &s0, &s1));
            }
        }
        Continuum::from_parts(g, items).expect("continuous image of a continuum is a continuum")
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &PLMap, cap: usize) -> Result<PLMap> {
        if self.graph != inner.graph {
            return Err(Error::InvalidArgument("maps live on different graphs".into()));
        }
        let g = &*self.graph;
        let mut out: Vec<Vec<Piece>> = Vec::with_capacity(g.edge_count());
        let mut total = 0usize;
        for e in g.edge_ids() {
            let mut pieces: Vec<Piece> = Vec::new();
            for p in &inner.pieces[e.0] {
                let len = p.path.length();
                if len.is_zero() {
                    let image = self.evaluate(&p.path.start(g));
                    push_merged(
                        &mut pieces,
                        Piece {
                            lo: p.lo.clone(),
                            hi: p.hi.clone(),
                            path: Path::constant(&image),
                        },
                        g,
                    );
                    continue;
                }
                let width = &p.hi - &p.lo;
                let mut offset = rational::zero();
                for seg in &p.path.segments {
                    let (lo, hi) = if seg.from <= seg.to {
                        (&seg.from, &seg.to)
                    } else {
                        (&seg.to, &seg.from)
                    };
                    let mut cuts: Vec<Rational> = self
                        .breakpoints(seg.edge)
                        .into_iter()
                        .filter(|b| b > lo && b < hi)
                        .collect();
                    if seg.from > seg.to {
                        cuts.reverse();
                    }
                    let mut marks = vec![seg.from.clone()];
                    marks.extend(cuts);
                    marks.push(seg.to.clone());
                    for w in marks.windows(2) {
                        let (c0, c1) = (&w[0], &w[1]);
                        let mid = (c0 + c1) / rational::int(2);
                        let outer = self.piece_at(seg.edge, &mid);
                        let a0 = &offset + (c0 - &seg.from).abs();
                        let a1 = &offset + (c1 - &seg.from).abs();
                        let t0 = &p.lo + &a0 / &len * &width;
                        let t1 = &p.lo + &a1 / &len * &width;
                        let q0 = outer.position(c0);
                        let q1 = outer.position(c1);
                        let path = if q0 <= q1 {
                            outer.path.sub_path(g, &q0, &q1)
                        } else {
                            outer.path.sub_path(g, &q1, &q0).reversed()
                        };
                        push_merged(
                            &mut pieces,
                            Piece {
                                lo: t0,
                                hi: t1,
                                path,
                            },
                            g,
                        );
                    }
                    offset += seg.length();
                }
            }
            total += pieces.iter().map(|p| p.path.segments.len()).sum::<usize>();
            if total > cap {
                return Err(Error::PieceExplosion { pieces: total, cap });
            }
            out.push(pieces);
        }
        Ok(PLMap {
            graph: self.graph.clone(),
            pieces: out,
        })
    }

    /// `f^n` as an explicit map, refusing to grow past `cap` linear pieces.
    pub fn compose_power(&self, n: usize, cap: usize) -> Result<PLMap> {
        if n == 0 {
            return Err(Error::InvalidArgument("power must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc, cap)?;
        }
        Ok(acc)
    }

    /// All solutions of `f(x) = x`.
    pub fn fixed_points(&self) -> FixedPointSet {
        let g = &*self.graph;
        let mut points: Vec<Point> = Vec::new();
        let mut segments: Vec<(EdgeId, Interval)> = Vec::new();
        for v in g.vertex_ids() {
            let p = g.vertex_point(v);
            if self.evaluate(&p) == p {
                points.push(p);
            }
        }
        for e in g.edge_ids() {
            for piece in &self.pieces[e.0] {
                let len = piece.path.length();
                if len.is_zero() {
                    let c = piece.path.start(g);
                    if g.vertex_at(&c).is_none()
                        && c.edge() == e
                        && piece.lo <= *c.t()
                        && *c.t() <= piece.hi
                    {
                        points.push(c);
                    }
                    continue;
                }
                let width = &piece.hi - &piece.lo;
                let speed = piece.speed();
                let mut offset = rational::zero();
                for seg in &piece.path.segments {
                    let seg_len = seg.length();
                    if seg.edge == e {
                        let t0 = &piece.lo + &offset / &len * &width;
                        let t1 = &piece.lo + (&offset + &seg_len) / &len * &width;
                        // f(t) = from + dir·speed·(t - t0) on [t0, t1].
                        let slope = if seg.to >= seg.from {
                            speed.clone()
                        } else {
                            -speed.clone()
                        };
                        let denom = rational::one() - &slope;
                        if denom.is_zero() {
                            if seg.from == t0 {
                                segments.push((e, Interval::new(t0, t1).expect("ordered")));
                            }
                        } else {
                            let t = (&seg.from - &slope * &t0) / denom;
                            if t0 <= t && t <= t1 {
                                points.push(g.canonical(e, t));
                            }
                        }
                    }
                    offset += seg_len;
                }
            }
        }
        // Merge fixed segments and drop points they already cover.
        segments.sort_by(|a, b| (a.0, a.1.lo()).cmp(&(b.0, b.1.lo())));
        let mut merged: Vec<(EdgeId, Interval)> = Vec::new();
        for (e, iv) in segments {
            match merged.last_mut() {
                Some((le, last)) if *le == e && iv.lo() <= last.hi() => {
                    if iv.hi() > last.hi() {
                        *last = Interval::new(last.lo().clone(), iv.hi().clone()).expect("ordered");
                    }
                }
                _ => merged.push((e, iv)),
            }
        }
        points.sort();
        points.dedup();
        let covered = |p: &Point| {
            merged.iter().any(|(e, iv)| {
                if *e == p.edge() && iv.contains(p.t()) {
                    return true;
                }
                match g.vertex_at(p) {
                    Some(v) => g.incident(v).iter().any(|&(f, end)| {
                        f == *e && iv.contains(&end.coordinate())
                    }),
                    None => false,
                }
            })
        };
        points.retain(|p| !covered(p));
        FixedPointSet {
            points,
            segments: merged,
        }
    }

    /// Text form, one `piece <edge> <lo> <hi> -> <path>` line per piece.
    pub fn to_text(&self) -> String {
        let g = &*self.graph;
        let mut out = String::new();
        for e in g.edge_ids() {
            for p in &self.pieces[e.0] {
                out.push_str(&format!(
                    "piece {} {} {} -> {}\n",
                    g.edge(e).name,
                    rational::format(&p.lo),
                    rational::format(&p.hi),
                    p.path.display(g)
                ));
            }
        }
        out
    }
}

/// Appends a piece, merging it into the previous one when both are the same
/// constant or when they run at the same speed.
fn push_merged(pieces: &mut Vec<Piece>, next: Piece, g: &Graph) {
    if let Some(last) = pieces.last_mut() {
        let both_constant = last.path.is_constant() && next.path.is_constant();
        if both_constant && last.path.start(g) == next.path.start(g) {
            last.hi = next.hi;
            return;
        }
        if !last.path.is_constant() && !next.path.is_constant() && last.speed() == next.speed() {
            last.path = last.path.concat(&next.path);
            last.hi = next.hi;
            return;
        }
    }
    pieces.push(next);
}

/// Convenience constructor for maps on a single-edge arc given as a
/// continuous interval map through its graph points `(x_i, y_i)`.
pub fn interval_map(graph: Arc<Graph>, nodes: &[(Rational, Rational)]) -> Result<PLMap> {
    if graph.edge_count() != 1 || graph.edge(EdgeId(0)).is_loop() {
        return Err(Error::InvalidArgument("interval maps need a single-arc graph".into()));
    }
    let e = EdgeId(0);
    let pieces = nodes
        .windows(2)
        .map(|w| {
            (
                e,
                Piece {
                    lo: w[0].0.clone(),
                    hi: w[1].0.clone(),
                    path: Path {
                        segments: vec![Segment::new(e, w[0].1.clone(), w[1].1.clone())],
                    },
                },
            )
        })
        .collect();
    PLMap::new(graph, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::metric_graph::families;
    use crate::rational::{int, ratio};

    fn on_arc(g: &Graph, t: Rational) -> Point {
        g.point(EdgeId(0), t).unwrap()
    }

    #[test]
    fn identity_evaluation_and_images() {
        let g = Arc::new(families::star(3));
        let id = PLMap::identity(g.clone());
        let x = g.point(EdgeId(1), ratio(2, 7)).unwrap();
        assert_eq!(id.evaluate(&x), x);
        let a = Continuum::segment(&g, EdgeId(2), ratio(1, 5), ratio(4, 5)).unwrap();
        assert_eq!(id.image_continuum(&a), a);
        let fp = id.fixed_points();
        assert!(fp.points.is_empty());
        assert_eq!(fp.segments.len(), 3);
        assert!(fp.segments.iter().all(|(_, iv)| *iv == Interval::full()));
    }

    #[test]
    fn truncated_tent_values() {
        let f = catalog::truncated_tent(int(3)).unwrap();
        let g = f.graph().clone();
        assert_eq!(f.evaluate(&on_arc(&g, ratio(1, 2))), on_arc(&g, int(1)));
        assert_eq!(f.evaluate(&on_arc(&g, int(1))), on_arc(&g, int(0)));
        let plateau = Continuum::segment(&g, EdgeId(0), ratio(1, 3), ratio(2, 3)).unwrap();
        assert_eq!(
            f.image_continuum(&plateau),
            Continuum::point(&g, &on_arc(&g, int(1)))
        );
        let f2 = f.compose_power(2, DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(f2.evaluate(&on_arc(&g, ratio(1, 9))), on_arc(&g, int(1)));
        let fp = f.fixed_points();
        assert!(fp.segments.is_empty());
        assert_eq!(fp.points, vec![on_arc(&g, int(0)), on_arc(&g, ratio(3, 4))]);
    }

    #[test]
    fn star_arm_permutation_images() {
        let f = catalog::star_3_4_2_5();
        let g = f.graph().clone();
        let a10 = g.edge_by_name("a1_0").unwrap();
        let a11 = g.edge_by_name("a1_1").unwrap();
        let arm = Continuum::segment(&g, a10, int(0), int(1)).unwrap();
        assert_eq!(
            f.image_continuum(&arm),
            Continuum::segment(&g, a11, int(0), int(1)).unwrap()
        );
        let center = g.vertex_point(g.vertex_by_name("c").unwrap());
        let fp = f.fixed_points();
        assert_eq!(fp.points, vec![center]);
        assert!(fp.segments.is_empty());

        let f12 = f.compose_power(12, DEFAULT_PIECE_CAP).unwrap();
        for name in ["a1_0", "a1_1", "a1_2", "a2_0", "a2_3"] {
            let e = g.edge_by_name(name).unwrap();
            let x = g.point(e, ratio(3, 7)).unwrap();
            assert_eq!(f12.evaluate(&x), x);
        }
        // 12 is not a multiple of 5: the five-arm group is shifted by 2.
        let a40 = g.edge_by_name("a4_0").unwrap();
        let a42 = g.edge_by_name("a4_2").unwrap();
        assert_eq!(
            f12.evaluate(&g.point(a40, ratio(1, 2)).unwrap()),
            g.point(a42, ratio(1, 2)).unwrap()
        );
    }

    #[test]
    fn compose_power_one_is_identity_operation() {
        let f = catalog::tent();
        assert_eq!(f.compose_power(1, 10).unwrap(), f);
        assert!(f.compose_power(0, 10).is_err());
    }

    #[test]
    fn compose_power_respects_cap() {
        let f = catalog::tent();
        // Tent^n has 2^n pieces.
        assert_eq!(f.compose_power(5, 1000).unwrap().linear_piece_count(), 32);
        assert!(matches!(
            f.compose_power(12, 1000),
            Err(Error::PieceExplosion { .. })
        ));
    }

    #[test]
    fn discontinuities_are_rejected() {
        let g = Arc::new(families::arc());
        let bad = interval_map(
            g.clone(),
            &[(int(0), int(0)), (ratio(1, 2), int(1))],
        );
        assert!(bad.is_err());
        let e = EdgeId(0);
        let jump = PLMap::new(
            g.clone(),
            vec![
                (
                    e,
                    Piece {
                        lo: int(0),
                        hi: ratio(1, 2),
                        path: Path::new(&g, vec![Segment::new(e, int(0), ratio(1, 2))]).unwrap(),
                    },
                ),
                (
                    e,
                    Piece {
                        lo: ratio(1, 2),
                        hi: int(1),
                        path: Path::new(&g, vec![Segment::new(e, ratio(3, 4), int(1))]).unwrap(),
                    },
                ),
            ],
        );
        assert!(matches!(jump, Err(Error::Discontinuity(_))));

        let s = Arc::new(families::star(2));
        // Arms disagree on the image of the shared center.
        let split = PLMap::new(
            s.clone(),
            vec![
                (
                    EdgeId(0),
                    Piece {
                        lo: int(0),
                        hi: int(1),
                        path: Path::new(&s, vec![Segment::new(EdgeId(0), ratio(1, 2), int(1))]).unwrap(),
                    },
                ),
                (
                    EdgeId(1),
                    Piece {
                        lo: int(0),
                        hi: int(1),
                        path: Path::new(&s, vec![Segment::new(EdgeId(1), int(0), int(1))]).unwrap(),
                    },
                ),
            ],
        );
        assert!(matches!(split, Err(Error::Discontinuity(_))));
    }

    #[test]
    fn paths_must_be_connected() {
        let g = families::path(2);
        let broken = Path::new(
            &g,
            vec![
                Segment::new(EdgeId(0), int(0), ratio(1, 2)),
                Segment::new(EdgeId(1), int(0), int(1)),
            ],
        );
        assert!(broken.is_err());
        let ok = Path::new(
            &g,
            vec![
                Segment::new(EdgeId(0), int(0), int(1)),
                Segment::new(EdgeId(1), int(0), ratio(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(ok.length(), ratio(3, 2));
    }

    #[test]
    fn geodesics_have_distance_length() {
        let g = families::lollipop();
        let p = g.point(EdgeId(3), ratio(1, 2)).unwrap();
        let q = g.point(EdgeId(1), ratio(1, 2)).unwrap();
        let path = Path::geodesic(&g, &p, &q);
        assert_eq!(path.length(), g.distance(&p, &q));
        assert_eq!(path.start(&g), p);
        assert_eq!(path.end(&g), q);
    }

    #[test]
    fn loop_rotation_fixed_points() {
        let f = catalog::denjoy_approx(ratio(1, 3)).unwrap();
        assert!(f.fixed_points().is_empty());
        let f3 = f.compose_power(3, 100).unwrap();
        let fp = f3.fixed_points();
        assert_eq!(fp.segments.len(), 1);
    }

    #[test]
    fn reflection_has_period_two_points() {
        let g = Arc::new(families::arc());
        let f = interval_map(g.clone(), &[(int(0), int(1)), (int(1), int(0))]).unwrap();
        let x = on_arc(&g, ratio(1, 4));
        let y = f.evaluate(&x);
        assert_eq!(y, on_arc(&g, ratio(3, 4)));
        assert_eq!(f.evaluate(&y), x);
        assert_eq!(f.fixed_points().points, vec![on_arc(&g, ratio(1, 2))]);
    }
}
