//! Named example maps.
//!
//! Builtins are addressed by strings such as `tent`, `truncated-tent(3)`,
//! `star-3-4-2-5`, `period-doubling(3)`, `arm-rotation(5)` or
//! `denjoy-approx(1/3)`; see [`lookup`].

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hyperspace::Continuum;
use crate::metric_graph::{families, EdgeId, Graph};
use crate::pl_map::markov::MarkovMap;
use crate::pl_map::{interval_map, Path, Piece, PLMap, Segment};
use crate::rational::{self, int, ratio, Rational};

/// Arm counts of the four cyclically permuted groups in the star example.
pub const STAR_GROUPS: [usize; 4] = [3, 4, 2, 5];

#[derive(Debug, Clone)]
pub struct Builtin {
    pub name: String,
    pub description: String,
    pub map: PLMap,
    /// Markov partition, when the map admits one we know how to close.
    pub markov: Option<MarkovMap>,
    /// Set for stand-ins of behaviour that exact rational maps cannot realize.
    pub approximate: bool,
}

/// Full tent `x ↦ 2x`, `x ↦ 2(1−x)` on a single arc.
pub fn tent() -> PLMap {
    interval_map(
        Arc::new(families::arc()),
        &[(int(0), int(0)), (ratio(1, 2), int(1)), (int(1), int(0))],
    )
    .expect("tent is continuous")
}

/// Truncated tent with slope `s > 2`: `sx` on `[0,1/s]`, `s(1−x)` on
/// `[1−1/s,1]` and the plateau value 1 in between.
pub fn truncated_tent(s: Rational) -> Result<PLMap> {
    if s <= int(2) {
        return Err(Error::InvalidArgument(format!(
            "truncated tent needs slope > 2, got {}",
            rational::format(&s)
        )));
    }
    let a = s.recip();
    interval_map(Arc::new(families::arc()), &truncated_tent_nodes(&a))
}

fn truncated_tent_nodes(a: &Rational) -> Vec<(Rational, Rational)> {
    vec![
        (int(0), int(0)),
        (a.clone(), int(1)),
        (int(1) - a, int(1)),
        (int(1), int(0)),
    ]
}

/// The star with arm groups of sizes 3, 4, 2, 5 around center `c`. Arm
/// `a{i}_{j}` runs from `c` (t = 0) to leaf `l{i}_{j}`.
pub fn star_3_4_2_5_graph() -> Graph {
    let mut edges = Vec::new();
    for (i, &k) in STAR_GROUPS.iter().enumerate() {
        for j in 0..k {
            edges.push((
                format!("a{}_{}", i + 1, j),
                "c".to_string(),
                format!("l{}_{}", i + 1, j),
            ));
        }
    }
    Graph::from_edges(edges).expect("star graph")
}

/// Isometric arm shuffle `a{i}_{j} → a{i}_{j+1 mod k_i}` on the 14-arm star.
pub fn star_3_4_2_5() -> PLMap {
    let graph = Arc::new(star_3_4_2_5_graph());
    let mut pieces = Vec::new();
    for (i, &k) in STAR_GROUPS.iter().enumerate() {
        for j in 0..k {
            let from = graph.edge_by_name(&format!("a{}_{}", i + 1, j)).expect("arm");
            let to = graph
                .edge_by_name(&format!("a{}_{}", i + 1, (j + 1) % k))
                .expect("arm");
            pieces.push((from, full_piece(&graph, to, false)));
        }
    }
    PLMap::new(graph, pieces).expect("arm shuffle is continuous")
}

/// Union of the first arm of each listed group (1-based), e.g. `[1, 2]`.
pub fn star_arms(g: &Graph, groups: &[usize]) -> Result<Continuum> {
    let mut items = Vec::new();
    for &i in groups {
        let e = g.edge_by_name(&format!("a{i}_0"))?;
        items.push((e, crate::hyperspace::Interval::full()));
    }
    Continuum::from_parts(g, items)
}

/// The continuum of arms `a1_0 ∪ a2_0`, period 12 under [`star_3_4_2_5`].
pub fn star_example_a(g: &Graph) -> Continuum {
    star_arms(g, &[1, 2]).expect("star graph")
}

/// The continuum of arms `a1_0 ∪ a3_0 ∪ a4_0`, period 30 under [`star_3_4_2_5`].
pub fn star_example_b(g: &Graph) -> Continuum {
    star_arms(g, &[1, 3, 4]).expect("star graph")
}

/// Cyclic isometric permutation of the arms of a `k`-star.
pub fn arm_rotation(k: usize) -> Result<PLMap> {
    if k == 0 {
        return Err(Error::InvalidArgument("arm-rotation needs k ≥ 1".into()));
    }
    let graph = Arc::new(families::star(k));
    let pieces = (0..k)
        .map(|i| (EdgeId(i), full_piece(&graph, EdgeId((i + 1) % k), false)))
        .collect();
    PLMap::new(graph, pieces)
}

/// Rotation by `θ = p/q` of a single loop. Only a rational stand-in for
/// circle dynamics without periodic points, hence flagged approximate.
pub fn denjoy_approx(theta: Rational) -> Result<PLMap> {
    if theta.is_negative() || theta >= int(1) {
        return Err(Error::InvalidArgument(format!(
            "rotation number must lie in [0,1), got {}",
            rational::format(&theta)
        )));
    }
    let graph = Arc::new(families::circle());
    let e = EdgeId(0);
    if theta.is_zero() {
        return Ok(PLMap::identity(graph));
    }
    let cut = int(1) - &theta;
    let pieces = vec![
        (
            e,
            Piece {
                lo: int(0),
                hi: cut.clone(),
                path: Path::new(&graph, vec![Segment::new(e, theta.clone(), int(1))])?,
            },
        ),
        (
            e,
            Piece {
                lo: cut,
                hi: int(1),
                path: Path::new(&graph, vec![Segment::new(e, int(0), theta)])?,
            },
        ),
    ];
    PLMap::new(graph, pieces)
}

/// One step of the period-doubling renormalization on interval-map nodes:
/// `1−x` on `[0,1/3]`, a linear bridge on `[1/3,2/3]`, and the rescaled
/// copy `G(3(1−z))/3` on `[2/3,1]`.
fn renormalize(nodes: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let three = int(3);
    let mut out = vec![(int(0), int(1)), (ratio(1, 3), ratio(2, 3))];
    for (x, y) in nodes.iter().rev() {
        out.push((int(1) - x / &three, y / &three));
    }
    simplify_nodes(out)
}

fn simplify_nodes(nodes: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(nodes.len());
    for node in nodes {
        if let Some(last) = out.last() {
            if last.0 == node.0 {
                continue;
            }
        }
        if out.len() >= 2 {
            let (x0, y0) = &out[out.len() - 2];
            let (x1, y1) = &out[out.len() - 1];
            let collinear = (y1 - y0) * (&node.0 - x1) == (&node.1 - y1) * (x1 - x0);
            if collinear {
                out.pop();
            }
        }
        out.push(node);
    }
    out
}

/// Interval-map nodes of the period-doubling map of the given depth.
pub fn period_doubling_nodes(depth: usize) -> Vec<(Rational, Rational)> {
    let mut nodes = truncated_tent_nodes(&ratio(1, 3));
    for _ in 0..depth {
        nodes = renormalize(&nodes);
    }
    nodes
}

/// Planted period-doubling map on an arc: `[0, 3^{-j}]` is a cycle of graphs
/// of period `2^j` for `j ≤ depth`, and the innermost return map is a
/// rescaled truncated tent with slope 3.
pub fn period_doubling(depth: usize) -> Result<PLMap> {
    if depth > 6 {
        return Err(Error::InvalidArgument(format!(
            "period-doubling depth {depth} exceeds 6"
        )));
    }
    interval_map(Arc::new(families::arc()), &period_doubling_nodes(depth))
}

/// Two copies of [`period_doubling`] on `[0,1/3]` and (mirrored) on
/// `[2/3,1]`, bridged linearly in the middle.
pub fn twin_period_doubling(depth: usize) -> Result<PLMap> {
    if depth > 5 {
        return Err(Error::InvalidArgument(format!(
            "twin-period-doubling depth {depth} exceeds 5"
        )));
    }
    let inner = period_doubling_nodes(depth);
    let three = int(3);
    let mut nodes: Vec<(Rational, Rational)> =
        inner.iter().map(|(x, y)| (x / &three, y / &three)).collect();
    for (x, y) in inner.iter().rev() {
        nodes.push((int(1) - x / &three, int(1) - y / &three));
    }
    interval_map(Arc::new(families::arc()), &simplify_nodes(nodes))
}

fn full_piece(g: &Graph, to: EdgeId, reversed: bool) -> Piece {
    let (a, b) = if reversed {
        (rational::one(), rational::zero())
    } else {
        (rational::zero(), rational::one())
    };
    Piece {
        lo: rational::zero(),
        hi: rational::one(),
        path: Path::new(g, vec![Segment::new(to, a, b)]).expect("full edge path"),
    }
}

/// Names accepted by [`lookup`], with their argument shapes.
pub const BUILTIN_NAMES: [&str; 7] = [
    "tent",
    "truncated-tent(s)",
    "star-3-4-2-5",
    "period-doubling(depth)",
    "twin-period-doubling(depth)",
    "arm-rotation(k)",
    "denjoy-approx(p/q)",
];

fn split_call(call: &str) -> (&str, Option<&str>) {
    match call.split_once('(') {
        Some((name, rest)) => (name.trim(), rest.strip_suffix(')').map(str::trim)),
        None => (call.trim(), None),
    }
}

fn parse_usize(call: &str, arg: Option<&str>) -> Result<usize> {
    arg.and_then(|a| a.parse().ok())
        .ok_or_else(|| Error::UnknownBuiltin(call.to_string()))
}

/// Resolves a builtin by name, e.g. `truncated-tent(5/2)`.
pub fn lookup(call: &str) -> Result<Builtin> {
    let (name, arg) = split_call(call);
    let unknown = || Error::UnknownBuiltin(call.to_string());
    let (map, approximate, description) = match name {
        "tent" if arg.is_none() => (tent(), false, "full tent map, slopes ±2".to_string()),
        "truncated-tent" => {
            let s = rational::parse(arg.ok_or_else(unknown)?)?;
            let d = format!("truncated tent with slope {}", rational::format(&s));
            (truncated_tent(s)?, false, d)
        }
        "star-3-4-2-5" if arg.is_none() => (
            star_3_4_2_5(),
            false,
            "14-arm star, arm groups 3,4,2,5 shuffled cyclically".to_string(),
        ),
        "period-doubling" => {
            let depth = parse_usize(call, arg)?;
            let d = format!("period-doubling map with {depth} renormalization levels");
            (period_doubling(depth)?, false, d)
        }
        "twin-period-doubling" => {
            let depth = parse_usize(call, arg)?;
            let d = format!("two invariant period-doubling blocks of depth {depth}");
            (twin_period_doubling(depth)?, false, d)
        }
        "arm-rotation" => {
            let k = parse_usize(call, arg)?;
            (arm_rotation(k)?, false, format!("cyclic rotation of a {k}-star"))
        }
        "denjoy-approx" => {
            let theta = rational::parse(arg.ok_or_else(unknown)?)?;
            let d = format!(
                "loop rotation by {} (rational approximant)",
                rational::format(&theta)
            );
            (denjoy_approx(theta)?, true, d)
        }
        _ => return Err(unknown()),
    };
    let markov = MarkovMap::close(map.clone(), 64).ok();
    Ok(Builtin {
        name: call.trim().to_string(),
        description,
        map,
        markov,
        approximate,
    })
}

/// Evaluates an interval map given by nodes at `x` (test helper for arcs).
pub fn eval_nodes(nodes: &[(Rational, Rational)], x: &Rational) -> Rational {
    for w in nodes.windows(2) {
        let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
        if x0 <= x && x <= x1 {
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    if x.is_negative() {
        nodes[0].1.clone()
    } else if *x >= Rational::one() {
        nodes.last().expect("nonempty").1.clone()
    } else {
        unreachable!("nodes cover [0,1]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_graph::Point;

    fn at(g: &Graph, t: Rational) -> Point {
        g.point(EdgeId(0), t).unwrap()
    }

    #[test]
    fn every_builtin_loads() {
        for call in [
            "tent",
            "truncated-tent(3)",
            "truncated-tent(5/2)",
            "star-3-4-2-5",
            "period-doubling(0)",
            "period-doubling(3)",
            "twin-period-doubling(2)",
            "arm-rotation(4)",
            "denjoy-approx(2/5)",
        ] {
            let b = lookup(call).unwrap_or_else(|e| panic!("{call}: {e}"));
            assert_eq!(b.approximate, call.starts_with("denjoy"));
        }
        assert!(lookup("nonsense").is_err());
        assert!(lookup("truncated-tent(2)").is_err());
        assert!(lookup("tent(3)").is_err());
    }

    #[test]
    fn period_doubling_levels() {
        let f = period_doubling(3).unwrap();
        let g = f.graph().clone();
        // [0,1/3] and [2/3,1] swap.
        assert_eq!(f.evaluate(&at(&g, int(0))), at(&g, int(1)));
        assert_eq!(f.evaluate(&at(&g, ratio(1, 3))), at(&g, ratio(2, 3)));
        let j = Continuum::segment(&g, EdgeId(0), int(0), ratio(1, 3)).unwrap();
        let fj = f.image_continuum(&j);
        assert_eq!(fj, Continuum::segment(&g, EdgeId(0), ratio(2, 3), int(1)).unwrap());
        assert_eq!(f.image_continuum(&fj), j);
        for (k, period) in [(1u32, 2usize), (2, 4), (3, 8)] {
            let jk = Continuum::segment(&g, EdgeId(0), int(0), ratio(1, 3i64.pow(k))).unwrap();
            let mut cur = jk.clone();
            for step in 1..=period {
                cur = f.image_continuum(&cur);
                if step < period {
                    assert!(!cur.intersects(&jk), "depth {k} step {step}");
                }
            }
            assert_eq!(cur, jk);
        }
    }

    #[test]
    fn markov_closure_of_builtins() {
        for call in ["tent", "truncated-tent(3)", "star-3-4-2-5", "period-doubling(3)"] {
            assert!(lookup(call).unwrap().markov.is_some(), "{call}");
        }
        let pd = lookup("period-doubling(3)").unwrap();
        assert_eq!(pd.markov.unwrap().cells().len(), 17);
    }

    #[test]
    fn nodes_evaluation_agrees_with_map() {
        let nodes = period_doubling_nodes(2);
        let f = period_doubling(2).unwrap();
        let g = f.graph().clone();
        for k in 0..=40 {
            let x = ratio(k, 40);
            assert_eq!(f.evaluate(&at(&g, x.clone())), at(&g, eval_nodes(&nodes, &x)));
        }
    }
}
