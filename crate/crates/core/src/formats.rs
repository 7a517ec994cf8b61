//! Text formats for graphs, maps and continua.
//!
//! ```text
//! # graph file
//! edge e0 v0 v1
//! edge e1 v1 v2
//!
//! # map file
//! piece e0 0 1/2 -> e0[0..1]
//! piece e0 1/2 1 -> e0[1..0]
//! grid e0 0 1/2 1          # optional Markov grid
//!
//! # continuum literal
//! { e0:[1/4,1], e1:[0,1/3] }
//! ```
//!
//! `#` starts a comment anywhere on a line. Rationals are `p/q`, integers or
//! finite decimals. Parse errors carry 1-based line and column.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hyperspace::{Continuum, Interval};
use crate::metric_graph::{EdgeId, Graph};
use crate::pl_map::markov::MarkovMap;
use crate::pl_map::{Path, Piece, PLMap, Segment};
use crate::rational::{self, Rational};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of one line with their 1-based columns,
/// stopping at `#`.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &content[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &content[s..]));
    }
    out.into_iter()
        .map(|(i, t)| (content[..i].chars().count() + 1, t))
        .collect()
}

fn rational_at(line: usize, column: usize, text: &str) -> Result<Rational> {
    rational::parse(text).map_err(|_| parse_error(line, column, format!("not a rational: `{text}`")))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut lines_of = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        if keyword != "edge" {
            return Err(parse_error(line, col, format!("expected `edge`, found `{keyword}`")));
        }
        if toks.len() != 4 {
            let col = toks.last().map_or(col, |t| t.0);
            return Err(parse_error(line, col, "expected `edge <id> <u> <v>`"));
        }
        if let Some(prev) = edges.iter().position(|(n, _, _): &(String, String, String)| n == toks[1].1) {
            return Err(parse_error(
                line,
                toks[1].0,
                format!("duplicate edge id `{}` (first on line {})", toks[1].1, lines_of[prev]),
            ));
        }
        edges.push((toks[1].1.to_string(), toks[2].1.to_string(), toks[3].1.to_string()));
        lines_of.push(line);
    }
    Graph::from_edges(edges)
}

pub fn graph_to_text(g: &Graph) -> String {
    g.to_text()
}

fn parse_segment(g: &Graph, line: usize, column: usize, tok: &str) -> Result<Segment> {
    let bad = || parse_error(line, column, format!("expected `edge[t0..t1]`, found `{tok}`"));
    let open = tok.find('[').ok_or_else(bad)?;
    let body = tok[open + 1..].strip_suffix(']').ok_or_else(bad)?;
    let (a, b) = body.split_once("..").ok_or_else(bad)?;
    let name = &tok[..open];
    let edge = g
        .edge_by_name(name)
        .map_err(|_| parse_error(line, column, format!("unknown edge `{name}`")))?;
    let from = rational_at(line, column + open + 1, a)?;
    let to = rational_at(line, column + open + 3 + a.len(), b)?;
    for t in [&from, &to] {
        if *t < rational::zero() || *t > rational::one() {
            return Err(parse_error(line, column, format!("coordinate {} outside [0,1]", rational::format(t))));
        }
    }
    Ok(Segment::new(edge, from, to))
}

/// A parsed map file: the map and, if `grid` lines were given, the Markov
/// grid they describe (edges without a `grid` line use their breakpoints).
#[derive(Debug, Clone)]
pub struct MapFile {
    pub map: PLMap,
    pub markov: Option<MarkovMap>,
}

pub fn parse_map(text: &str, graph: Arc<Graph>) -> Result<MapFile> {
    let g = &*graph;
    let mut pieces = Vec::new();
    let mut grid: Vec<Option<Vec<Rational>>> = vec![None; g.edge_count()];
    let mut any_grid = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        match keyword {
            "piece" => {
                if toks.len() < 6 || toks[4].1 != "->" {
                    return Err(parse_error(line, col, "expected `piece <edge> <lo> <hi> -> <path>`"));
                }
                let edge = g
                    .edge_by_name(toks[1].1)
                    .map_err(|_| parse_error(line, toks[1].0, format!("unknown edge `{}`", toks[1].1)))?;
                let lo = rational_at(line, toks[2].0, toks[2].1)?;
                let hi = rational_at(line, toks[3].0, toks[3].1)?;
                let segs = toks[5..]
                    .iter()
                    .map(|&(c, t)| parse_segment(g, line, c, t))
                    .collect::<Result<Vec<_>>>()?;
                let path = Path::new(g, segs).map_err(|e| parse_error(line, toks[5].0, e.to_string()))?;
                pieces.push((edge, Piece { lo, hi, path }));
            }
            "grid" => {
                if toks.len() < 2 {
                    return Err(parse_error(line, col, "expected `grid <edge> <t>...`"));
                }
                let edge = g
                    .edge_by_name(toks[1].1)
                    .map_err(|_| parse_error(line, toks[1].0, format!("unknown edge `{}`", toks[1].1)))?;
                let ts = toks[2..]
                    .iter()
                    .map(|&(c, t)| rational_at(line, c, t))
                    .collect::<Result<Vec<_>>>()?;
                grid[edge.0].get_or_insert_with(Vec::new).extend(ts);
                any_grid = true;
            }
            other => {
                return Err(parse_error(line, col, format!("expected `piece` or `grid`, found `{other}`")));
            }
        }
    }
    let map = PLMap::new(graph.clone(), pieces)?;
    let markov = if any_grid {
        let full = grid
            .into_iter()
            .enumerate()
            .map(|(i, ts)| ts.unwrap_or_else(|| map.breakpoints(EdgeId(i))))
            .collect();
        Some(MarkovMap::new(map.clone(), full)?)
    } else {
        None
    };
    Ok(MapFile { map, markov })
}

/// Map file text; includes `grid` lines when a Markov grid is supplied.
pub fn map_to_text(map: &PLMap, markov: Option<&MarkovMap>) -> String {
    let mut out = map.to_text();
    if let Some(mm) = markov {
        let g = map.graph();
        for e in g.edge_ids() {
            let ts: Vec<String> = mm.grid(e).iter().map(rational::format).collect();
            out.push_str(&format!("grid {} {}\n", g.edge(e).name, ts.join(" ")));
        }
    }
    out
}

/// Parses a continuum literal. Repeated edges are allowed; the result is
/// canonicalized and must be connected.
pub fn parse_continuum(text: &str, g: &Graph) -> Result<Continuum> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let mut line_starts = vec![0usize];
    for (i, c) in chars.iter().enumerate() {
        if *c == '\n' {
            line_starts.push(i + 1);
        }
    }
    let locate = |i: usize| -> (usize, usize) {
        let l = line_starts.partition_point(|&s| s <= i);
        (l, i - line_starts[l - 1] + 1)
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let expect = |pos: &mut usize, want: char| -> Result<()> {
        skip_ws(pos);
        if *pos < chars.len() && chars[*pos] == want {
            *pos += 1;
            Ok(())
        } else {
            let (l, c) = locate(*pos);
            let found = chars.get(*pos).map_or("end of input".to_string(), |c| format!("`{c}`"));
            Err(parse_error(l, c, format!("expected `{want}`, found {found}")))
        }
    };
    let take_until = |pos: &mut usize, stops: &[char]| -> (usize, String) {
        skip_ws(pos);
        let start = *pos;
        while *pos < chars.len() && !stops.contains(&chars[*pos]) {
            *pos += 1;
        }
        (start, chars[start..*pos].iter().collect::<String>().trim().to_string())
    };
    expect(&mut pos, '{')?;
    let mut items = Vec::new();
    loop {
        skip_ws(&mut pos);
        if pos < chars.len() && chars[pos] == '}' {
            pos += 1;
            break;
        }
        if !items.is_empty() {
            expect(&mut pos, ',')?;
        }
        let (start, name) = take_until(&mut pos, &[':', '}', ',']);
        let (line, col) = locate(start);
        let edge = g
            .edge_by_name(&name)
            .map_err(|_| parse_error(line, col, format!("unknown edge `{name}`")))?;
        expect(&mut pos, ':')?;
        expect(&mut pos, '[')?;
        let (s0, lo) = take_until(&mut pos, &[',', ']']);
        let (l0, c0) = locate(s0);
        let lo = rational_at(l0, c0, &lo)?;
        expect(&mut pos, ',')?;
        let (s1, hi) = take_until(&mut pos, &[']']);
        let (l1, c1) = locate(s1);
        let hi = rational_at(l1, c1, &hi)?;
        expect(&mut pos, ']')?;
        let iv = Interval::new(lo, hi).map_err(|e| parse_error(l0, c0, e.to_string()))?;
        items.push((edge, iv));
    }
    skip_ws(&mut pos);
    if pos < chars.len() {
        let (l, c) = locate(pos);
        return Err(parse_error(l, c, "trailing input after `}`"));
    }
    if items.is_empty() {
        return Err(Error::EmptyContinuum);
    }
    Continuum::from_parts(g, items)
}

pub fn continuum_to_text(c: &Continuum, g: &Graph) -> String {
    c.display(g)
}
