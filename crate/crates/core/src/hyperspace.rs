//! Subcontinua of a metric graph and the Hausdorff metric on them.
//!
//! A [`Continuum`] stores, for every edge, the intersection of the set with
//! that closed edge as a sorted list of disjoint closed intervals. Because
//! every vertex of the set is recorded on each incident edge end, this
//! representation is unique, so structural equality is set equality and the
//! derived `Hash` can key orbit tables directly.
//!
//! Distances to a set are piecewise linear along an edge with slopes ±1, so
//! the Hausdorff distance, closed neighborhoods and the diameter are all
//! computed exactly from finitely many rational candidate points.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric_graph::{EdgeEnd, EdgeId, Graph, Point, UnionFind, VertexId};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi || lo.is_negative() || hi > rational::one() {
            return Err(Error::InvalidInterval(
                rational::format(&lo),
                rational::format(&hi),
            ));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(t: Rational) -> Result<Self> {
        Interval::new(t.clone(), t)
    }

    pub fn full() -> Self {
        Interval {
            lo: rational::zero(),
            hi: rational::one(),
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.lo <= t && t <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn meets(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// A nonempty closed connected subset of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Continuum {
    parts: Vec<Vec<Interval>>,
}

/// Sorted, merged closed intervals per edge with vertex points recorded on
/// every incident edge end. Not necessarily connected.
fn normalize(g: &Graph, mut parts: Vec<Vec<Interval>>) -> Vec<Vec<Interval>> {
    for list in parts.iter_mut() {
        merge_in_place(list);
    }
    let mut vertices = vec![false; g.vertex_count()];
    for (e, list) in parts.iter().enumerate() {
        let edge = g.edge(EdgeId(e));
        if let Some(first) = list.first() {
            if first.lo.is_zero() {
                vertices[edge.u.0] = true;
            }
        }
        if let Some(last) = list.last() {
            if last.hi == rational::one() {
                vertices[edge.v.0] = true;
            }
        }
    }
    let mut touched = vec![false; parts.len()];
    for v in g.vertex_ids() {
        if !vertices[v.0] {
            continue;
        }
        for &(e, end) in g.incident(v) {
            let t = end.coordinate();
            let list = &mut parts[e.0];
            if !list.iter().any(|iv| iv.contains(&t)) {
                list.push(Interval {
                    lo: t.clone(),
                    hi: t,
                });
                touched[e.0] = true;
            }
        }
    }
    for (e, list) in parts.iter_mut().enumerate() {
        if touched[e] {
            merge_in_place(list);
        }
    }
    parts
}

fn merge_in_place(list: &mut Vec<Interval>) {
    if list.len() < 2 {
        return;
    }
    list.sort();
    let mut merged: Vec<Interval> = Vec::with_capacity(list.len());
    for iv in list.drain(..) {
        match merged.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => merged.push(iv),
        }
    }
    *list = merged;
}

fn is_connected(g: &Graph, parts: &[Vec<Interval>]) -> bool {
    let count: usize = parts.iter().map(Vec::len).sum();
    if count == 0 {
        return false;
    }
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n + count);
    let mut used_vertex = vec![false; n];
    let mut idx = n;
    for (e, list) in parts.iter().enumerate() {
        let edge = g.edge(EdgeId(e));
        for iv in list {
            if iv.lo.is_zero() {
                uf.union(idx, edge.u.0);
                used_vertex[edge.u.0] = true;
            }
            if iv.hi == rational::one() {
                uf.union(idx, edge.v.0);
                used_vertex[edge.v.0] = true;
            }
            idx += 1;
        }
    }
    let root = uf.find(n);
    (n..n + count).all(|i| uf.find(i) == root)
}

impl Continuum {
    /// Builds a continuum from raw `(edge, interval)` pieces, canonicalizing
    /// and checking that the union is nonempty and connected.
    pub fn from_parts<I>(g: &Graph, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = (EdgeId, Interval)>,
    {
        let mut parts = vec![Vec::new(); g.edge_count()];
        let mut any = false;
        for (e, iv) in items {
            if e.0 >= parts.len() {
                return Err(Error::UnknownEdge(format!("#{}", e.0)));
            }
            parts[e.0].push(iv);
            any = true;
        }
        if !any {
            return Err(Error::EmptyContinuum);
        }
        let parts = normalize(g, parts);
        if !is_connected(g, &parts) {
            return Err(Error::DisconnectedContinuum);
        }
        Ok(Continuum { parts })
    }

    pub fn whole(g: &Graph) -> Self {
        Continuum::from_parts(g, g.edge_ids().map(|e| (e, Interval::full())))
            .expect("a graph is connected")
    }

    pub fn point(g: &Graph, p: &Point) -> Self {
        Continuum::from_parts(g, [(p.edge(), Interval::point(p.t().clone()).expect("in range"))])
            .expect("a point is connected")
    }

    /// `[lo, hi]` on a single edge.
    pub fn segment(g: &Graph, e: EdgeId, lo: Rational, hi: Rational) -> Result<Self> {
        Continuum::from_parts(g, [(e, Interval::new(lo, hi)?)])
    }

    /// Intervals of the set on one edge.
    pub fn on_edge(&self, e: EdgeId) -> &[Interval] {
        &self.parts[e.0]
    }

    pub fn parts(&self) -> impl Iterator<Item = (EdgeId, &Interval)> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(e, list)| list.iter().map(move |iv| (EdgeId(e), iv)))
    }

    pub fn interval_count(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.parts[p.edge().0].iter().any(|iv| iv.contains(p.t()))
    }

    pub fn contains_vertex(&self, g: &Graph, v: VertexId) -> bool {
        self.contains_point(&g.vertex_point(v))
    }

    /// `self ⊂ other`.
    pub fn is_subset(&self, other: &Continuum) -> bool {
        self.parts.iter().zip(&other.parts).all(|(mine, theirs)| {
            mine.iter()
                .all(|iv| theirs.iter().any(|big| big.contains_interval(iv)))
        })
    }

    pub fn contains(&self, other: &Continuum) -> bool {
        other.is_subset(self)
    }

    pub fn intersects(&self, other: &Continuum) -> bool {
        self.parts.iter().zip(&other.parts).any(|(mine, theirs)| {
            mine.iter().any(|a| theirs.iter().any(|b| a.meets(b)))
        })
    }

    /// `self ∩ other`: `None` when empty, an error when disconnected (which
    /// cannot happen on trees).
    pub fn intersection(&self, g: &Graph, other: &Continuum) -> Result<Option<Continuum>> {
        let mut items = Vec::new();
        for (e, (mine, theirs)) in self.parts.iter().zip(&other.parts).enumerate() {
            for a in mine {
                for b in theirs {
                    if a.meets(b) {
                        let lo = rational::max(&a.lo, &b.lo);
                        let hi = rational::min(&a.hi, &b.hi);
                        items.push((EdgeId(e), Interval { lo, hi }));
                    }
                }
            }
        }
        if items.is_empty() {
            return Ok(None);
        }
        Continuum::from_parts(g, items).map(Some)
    }

    /// `self ∪ other`, which must be connected.
    pub fn union(&self, g: &Graph, other: &Continuum) -> Result<Continuum> {
        Continuum::from_parts(
            g,
            self.parts()
                .chain(other.parts())
                .map(|(e, iv)| (e, iv.clone())),
        )
    }

    /// Total length of the set.
    pub fn length(&self, g: &Graph) -> Rational {
        let _ = g;
        self.parts
            .iter()
            .flatten()
            .fold(rational::zero(), |acc, iv| acc + iv.length())
    }

    /// The single point of a degenerate continuum.
    pub fn as_point(&self, g: &Graph) -> Option<Point> {
        let mut found: Option<Point> = None;
        for (e, iv) in self.parts() {
            if !iv.is_degenerate() {
                return None;
            }
            let p = g.canonical(e, iv.lo.clone());
            match &found {
                None => found = Some(p),
                Some(q) if *q == p => {}
                Some(_) => return None,
            }
        }
        found
    }

    pub fn is_degenerate(&self, g: &Graph) -> bool {
        self.as_point(g).is_some()
    }

    /// Points of the set whose every neighbourhood meets the complement,
    /// in canonical form and sorted.
    pub fn boundary_points(&self, g: &Graph) -> Vec<Point> {
        let mut out = Vec::new();
        for (e, list) in self.parts.iter().enumerate() {
            let e = EdgeId(e);
            for iv in list {
                for t in [&iv.lo, &iv.hi] {
                    let p = g.canonical(e, t.clone());
                    let on_boundary = match g.vertex_at(&p) {
                        None => true,
                        Some(v) => g.incident(v).iter().any(|&(f, end)| {
                            !self.parts[f.0].iter().any(|j| match end {
                                EdgeEnd::Start => j.lo.is_zero() && !j.hi.is_zero(),
                                EdgeEnd::Finish => {
                                    j.hi == rational::one() && j.lo != rational::one()
                                }
                            })
                        }),
                    };
                    if on_boundary {
                        out.push(p);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Distance from every vertex to the set.
    pub fn vertex_distances(&self, g: &Graph) -> Vec<Rational> {
        g.vertex_ids()
            .map(|w| {
                self.parts()
                    .flat_map(|(e, iv)| {
                        [
                            g.vertex_distance_raw(w, e, &iv.lo),
                            g.vertex_distance_raw(w, e, &iv.hi),
                        ]
                    })
                    .min()
                    .expect("nonempty")
            })
            .collect()
    }

    /// Distance from a point to the set.
    pub fn distance_to_point(&self, g: &Graph, p: &Point) -> Rational {
        let vd = self.vertex_distances(g);
        let sources = self.sources(g, p.edge(), &vd);
        eval_sources(&sources, p.t())
    }

    /// Distance-to-set cones along edge `e`: `(lo, hi, cost)` meaning
    /// `dist(t, [lo, hi]) + cost`. Their minimum is the distance to the set.
    fn sources(&self, g: &Graph, e: EdgeId, vd: &[Rational]) -> Vec<(Rational, Rational, Rational)> {
        let edge = g.edge(e);
        let mut out: Vec<_> = self.parts[e.0]
            .iter()
            .map(|iv| (iv.lo.clone(), iv.hi.clone(), rational::zero()))
            .collect();
        out.push((rational::zero(), rational::zero(), vd[edge.u.0].clone()));
        out.push((rational::one(), rational::one(), vd[edge.v.0].clone()));
        out
    }

    /// `max_{x ∈ self} dist(x, other)`.
    pub fn directed_distance(&self, g: &Graph, other: &Continuum) -> Rational {
        let vd = other.vertex_distances(g);
        let mut best = rational::zero();
        for (e, list) in self.parts.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            let sources = other.sources(g, EdgeId(e), &vd);
            for iv in list {
                let m = max_on_interval(&sources, &iv.lo, &iv.hi);
                if m > best {
                    best = m;
                }
            }
        }
        best
    }

    /// Exact Hausdorff distance.
    pub fn hausdorff_distance(&self, g: &Graph, other: &Continuum) -> Rational {
        if self == other {
            return rational::zero();
        }
        let ab = self.directed_distance(g, other);
        let ba = other.directed_distance(g, self);
        rational::max(&ab, &ba)
    }

    /// Closed `eps`-neighbourhood `{x : dist(x, self) ≤ eps}`.
    pub fn neighborhood(&self, g: &Graph, eps: &Rational) -> Result<Continuum> {
        if eps.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "negative radius {}",
                rational::format(eps)
            )));
        }
        let vd = self.vertex_distances(g);
        let mut items = Vec::new();
        for e in g.edge_ids() {
            for (lo, hi, cost) in self.sources(g, e, &vd) {
                if &cost > eps {
                    continue;
                }
                let slack = eps - &cost;
                let a = rational::clamp_unit(&lo - &slack);
                let b = rational::clamp_unit(&hi + &slack);
                items.push((e, Interval { lo: a, hi: b }));
            }
        }
        Continuum::from_parts(g, items)
    }

    /// Diameter in the ambient path metric: `max_{x,y ∈ self} d(x, y)`.
    pub fn diameter(&self, g: &Graph) -> Rational {
        let parts: Vec<(EdgeId, &Interval)> = self.parts().collect();
        let mut best = rational::zero();
        for (i, &(e1, a)) in parts.iter().enumerate() {
            for &(e2, b) in &parts[i..] {
                let m = pair_diameter(g, e1, a, e2, b);
                if m > best {
                    best = m;
                }
            }
        }
        best
    }

    /// Degenerate vertex records that the literal form can leave out: the
    /// vertex is shown by its canonical edge or by a longer interval.
    fn implied_vertex_record(&self, g: &Graph, e: EdgeId, iv: &Interval) -> bool {
        if !iv.is_degenerate() {
            return false;
        }
        let p = g.canonical(e, iv.lo.clone());
        let Some(v) = g.vertex_at(&p) else {
            return false;
        };
        let covered = g.incident(v).iter().any(|&(f, end)| {
            let t = end.coordinate();
            self.on_edge(f).iter().any(|j| !j.is_degenerate() && j.contains(&t))
        });
        covered || p.edge() != e
    }

    /// Literal form `{ e3:[1/4,1], e7:[0,1/3] }`, edges in declaration order.
    pub fn display(&self, g: &Graph) -> String {
        let mut out = String::from("{ ");
        let mut first = true;
        for (e, iv) in self.parts() {
            if self.implied_vertex_record(g, e, iv) {
                continue;
            }
            if !first {
                out.push_str(", ");
            }
            first = false;
            let _ = write!(
                out,
                "{}:[{},{}]",
                g.edge(e).name,
                rational::format(&iv.lo),
                rational::format(&iv.hi)
            );
        }
        out.push_str(" }");
        out
    }
}

fn eval_sources(sources: &[(Rational, Rational, Rational)], t: &Rational) -> Rational {
    sources
        .iter()
        .map(|(lo, hi, c)| {
            let d = if t < lo {
                lo - t
            } else if t > hi {
                t - hi
            } else {
                rational::zero()
            };
            d + c
        })
        .min()
        .expect("sources nonempty")
}

/// Max over `[a, b]` of the minimum of the source cones. The minimum of
/// slope ±1 cones peaks either at the ends or where a rising flank of one
/// cone meets a falling flank of another.
fn max_on_interval(sources: &[(Rational, Rational, Rational)], a: &Rational, b: &Rational) -> Rational {
    let mut best = rational::max(&eval_sources(sources, a), &eval_sources(sources, b));
    for (_, r_i, c_i) in sources {
        for (l_j, _, c_j) in sources {
            if r_i >= l_j {
                continue;
            }
            let t = (l_j + r_i + c_j - c_i) / rational::int(2);
            if &t > a && &t < b {
                let v = eval_sources(sources, &t);
                if v > best {
                    best = v;
                }
            }
        }
    }
    best
}

/// `α·t + β·s + γ`.
#[derive(Clone)]
struct Affine {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl Affine {
    fn eval(&self, t: &Rational, s: &Rational) -> Rational {
        &self.a * t + &self.b * s + &self.c
    }

    fn minus(&self, other: &Affine) -> Affine {
        Affine {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            c: &self.c - &other.c,
        }
    }
}

fn end_cost_affine(end: usize, first: bool) -> Affine {
    // end 0: cost t; end 1: cost 1 - t.
    let (coef, c) = if end == 0 {
        (rational::one(), rational::zero())
    } else {
        (-rational::one(), rational::one())
    };
    if first {
        Affine {
            a: coef,
            b: rational::zero(),
            c,
        }
    } else {
        Affine {
            a: rational::zero(),
            b: coef,
            c,
        }
    }
}

/// `max d(x, y)` for `x` in interval `a` on `e1` and `y` in interval `b` on
/// `e2`. The distance there is a minimum of affine functions (one per route),
/// hence concave on each convex cell, so the max sits at a vertex of the
/// arrangement clipped to the domain.
fn pair_diameter(g: &Graph, e1: EdgeId, a: &Interval, e2: EdgeId, b: &Interval) -> Rational {
    let ends1 = [g.edge(e1).u, g.edge(e1).v];
    let ends2 = [g.edge(e2).u, g.edge(e2).v];
    let mut routes = Vec::with_capacity(5);
    for (i, &x) in ends1.iter().enumerate() {
        for (j, &y) in ends2.iter().enumerate() {
            let ca = end_cost_affine(i, true);
            let cb = end_cost_affine(j, false);
            routes.push(Affine {
                a: ca.a + cb.a,
                b: ca.b + cb.b,
                c: ca.c + cb.c + Rational::from_integer(g.hops(x, y).into()),
            });
        }
    }
    if e1 != e2 {
        return max_min_affine(&routes, a, b, None);
    }
    // Same edge: the direct route |t - s| is affine on each side of t = s.
    let mut best = rational::zero();
    for sign in [1i64, -1] {
        let direct = Affine {
            a: rational::int(sign),
            b: rational::int(-sign),
            c: rational::zero(),
        };
        let mut terms = routes.clone();
        terms.push(direct.clone());
        // Domain side: sign·(t - s) ≥ 0.
        let m = max_min_affine(&terms, a, b, Some(&direct));
        if m > best {
            best = m;
        }
    }
    best
}

fn max_min_affine(terms: &[Affine], a: &Interval, b: &Interval, halfplane: Option<&Affine>) -> Rational {
    let inside = |t: &Rational, s: &Rational| {
        a.contains(t)
            && b.contains(s)
            && halfplane.is_none_or(|h| !h.eval(t, s).is_negative())
    };
    let eval = |t: &Rational, s: &Rational| {
        terms
            .iter()
            .map(|f| f.eval(t, s))
            .min()
            .expect("terms nonempty")
    };

    let corners = [
        (a.lo.clone(), b.lo.clone()),
        (a.hi.clone(), b.lo.clone()),
        (a.hi.clone(), b.hi.clone()),
        (a.lo.clone(), b.hi.clone()),
    ];
    let mut polygon: Vec<(Rational, Rational)> = corners.to_vec();
    if let Some(h) = halfplane {
        polygon = clip(&polygon, h);
        if polygon.is_empty() {
            return rational::zero();
        }
    }

    let mut candidates: Vec<(Rational, Rational)> = polygon.clone();
    let n = polygon.len();
    let diffs: Vec<Affine> = (0..terms.len())
        .flat_map(|i| (i + 1..terms.len()).map(move |j| (i, j)))
        .map(|(i, j)| terms[i].minus(&terms[j]))
        .collect();
    for k in 0..n {
        let (p, q) = (&polygon[k], &polygon[(k + 1) % n]);
        for d in &diffs {
            let fp = d.eval(&p.0, &p.1);
            let fq = d.eval(&q.0, &q.1);
            if fp == fq {
                continue;
            }
            let lambda = &fp / (&fp - &fq);
            if lambda.is_negative() || lambda > rational::one() {
                continue;
            }
            candidates.push((
                &p.0 + &lambda * (&q.0 - &p.0),
                &p.1 + &lambda * (&q.1 - &p.1),
            ));
        }
    }
    for i in 0..diffs.len() {
        for j in i + 1..diffs.len() {
            let (d1, d2) = (&diffs[i], &diffs[j]);
            let det = &d1.a * &d2.b - &d1.b * &d2.a;
            if det.is_zero() {
                continue;
            }
            let t = (-&d1.c * &d2.b + &d1.b * &d2.c) / &det;
            let s = (-&d1.a * &d2.c + &d1.c * &d2.a) / &det;
            if inside(&t, &s) {
                candidates.push((t, s));
            }
        }
    }
    candidates
        .iter()
        .filter(|(t, s)| inside(t, s))
        .map(|(t, s)| eval(t, s))
        .max()
        .unwrap_or_else(rational::zero)
}

/// Clips a convex polygon to `h ≥ 0`.
fn clip(polygon: &[(Rational, Rational)], h: &Affine) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    let n = polygon.len();
    for k in 0..n {
        let p = &polygon[k];
        let q = &polygon[(k + 1) % n];
        let fp = h.eval(&p.0, &p.1);
        let fq = h.eval(&q.0, &q.1);
        if !fp.is_negative() {
            out.push(p.clone());
        }
        if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
            let lambda = &fp / (&fp - &fq);
            out.push((
                &p.0 + &lambda * (&q.0 - &p.0),
                &p.1 + &lambda * (&q.1 - &p.1),
            ));
        }
    }
    out
}

/// One step of the induced map `f̃ : C(G) → C(G)`, `A ↦ f(A)`.
pub fn induced_step(f: &crate::pl_map::PLMap, a: &Continuum) -> Continuum {
    f.image_continuum(a)
}

/// Random points and continua for property suites and probes.
pub mod sample {
    use super::*;
    use rand::Rng;

    /// Uniform edge, coordinate `k/denominator`.
    pub fn point<R: Rng + ?Sized>(rng: &mut R, g: &Graph, denominator: i64) -> Point {
        let e = EdgeId(rng.gen_range(0..g.edge_count()));
        let k = rng.gen_range(0..=denominator);
        g.canonical(e, rational::ratio(k, denominator))
    }

    /// A random continuum: a closed ball, intersected with a second ball
    /// when that keeps it connected; occasionally a single point.
    pub fn continuum<R: Rng + ?Sized>(rng: &mut R, g: &Graph, denominator: i64) -> Continuum {
        let x = point(rng, g, denominator);
        let ball = Continuum::point(g, &x);
        if rng.gen_bool(0.1) {
            return ball;
        }
        let r = rational::ratio(rng.gen_range(1..=2 * denominator), denominator);
        let first = ball.neighborhood(g, &r).expect("radius is positive");
        let y = point(rng, g, denominator);
        let r2 = rational::ratio(rng.gen_range(1..=2 * denominator), denominator);
        let second = Continuum::point(g, &y)
            .neighborhood(g, &r2)
            .expect("radius is positive");
        match first.intersection(g, &second) {
            Ok(Some(c)) => c,
            _ => first,
        }
    }

    /// A continuum near `b`: grown by a random radius below `delta`, then
    /// with some interval ends inside edges pulled inward by less than
    /// `delta`. Distances are not guaranteed; callers measure them exactly.
    pub fn perturb<R: Rng + ?Sized>(
        rng: &mut R,
        g: &Graph,
        b: &Continuum,
        delta: &Rational,
        resolution: i64,
    ) -> Continuum {
        let unit = delta / Rational::from_integer(resolution.into());
        let step = |rng: &mut R| &unit * Rational::from_integer(rng.gen_range(0..resolution).into());
        let grow = if rng.gen_bool(0.7) { step(rng) } else { rational::zero() };
        let grown = b.neighborhood(g, &grow).expect("radius nonnegative");
        let zero = rational::zero();
        let one = rational::one();
        let items: Vec<(EdgeId, Interval)> = grown
            .parts()
            .map(|(e, iv)| {
                if iv.is_degenerate() {
                    return (e, iv.clone());
                }
                let trim_lo = iv.lo > zero && rng.gen_bool(0.5);
                let trim_hi = iv.hi < one && rng.gen_bool(0.5);
                let mut lo = iv.lo.clone();
                let mut hi = iv.hi.clone();
                if trim_lo {
                    lo += step(rng);
                }
                if trim_hi {
                    hi -= step(rng);
                }
                if lo > hi {
                    if trim_lo && trim_hi {
                        let mid = (&iv.lo + &iv.hi) / rational::int(2);
                        lo = mid.clone();
                        hi = mid;
                    } else if trim_lo {
                        lo = hi.clone();
                    } else {
                        hi = lo.clone();
                    }
                }
                (e, Interval { lo, hi })
            })
            .collect();
        Continuum::from_parts(g, items).unwrap_or(grown)
    }

    /// Random continuum contained in `outer` (a sub-ball of it).
    pub fn sub_continuum<R: Rng + ?Sized>(
        rng: &mut R,
        g: &Graph,
        outer: &Continuum,
        denominator: i64,
    ) -> Continuum {
        let parts: Vec<(EdgeId, &Interval)> = outer.parts().collect();
        let (e, iv) = parts[rng.gen_range(0..parts.len())];
        let span = iv.length() * Rational::from_integer(denominator.into());
        let steps = num_traits::ToPrimitive::to_i64(&span.floor().to_integer()).unwrap_or(0);
        let t = if steps > 0 {
            &iv.lo + rational::ratio(rng.gen_range(0..=steps), denominator)
        } else {
            iv.lo.clone()
        };
        let center = Continuum::point(g, &g.canonical(e, t));
        let r = rational::ratio(rng.gen_range(0..=denominator), denominator);
        let ball = center.neighborhood(g, &r).expect("radius nonnegative");
        match ball.intersection(g, outer) {
            Ok(Some(c)) => c,
            _ => center,
        }
    }
}
