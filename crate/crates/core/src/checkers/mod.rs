//! Executable checks of structural facts about tree maps.
//!
//! Every check returns a [`CheckOutcome`]. A failing outcome carries a
//! [`Counterexample`] in text form that [`recheck`] can parse and re-run; an
//! outcome whose hypotheses do not hold is [`Status::PreconditionUnmet`],
//! never a failure.

pub mod center;
pub mod enumerate;
pub mod equicontinuity;
pub mod random;
pub mod suites;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::dynamics::detect_exact_period;
use crate::error::{Error, Result};
use crate::formats;
use crate::hyperspace::Continuum;
use crate::pl_map::PLMap;
use crate::rational::{self, Rational};

pub use center::{check_center_structure, CenterOptions, CenterReport, GeneratingSequence};
pub use enumerate::{enumerate_periodic_subtrees, EnumerateOptions, PeriodicSubtree};
pub use equicontinuity::{probe_equicontinuity, EquicontinuityReport, ProbeOptions};

/// Default horizon for exact period detection inside checkers.
pub const DEFAULT_CHECK_HORIZON: usize = 5000;
pub const DEFAULT_RECURRENCE_HORIZON: usize = 5000;

/// `1/10^4`.
pub fn default_recurrence_tol() -> Rational {
    rational::inverse_power_of_ten(4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    CycleOfGraphs,
    PeriodBound,
    Nesting,
    Recurrence,
    CenterStructure,
    GeneratingSequence,
    Equicontinuity,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::CycleOfGraphs => "cycle-of-graphs",
            TheoremId::PeriodBound => "period-bound",
            TheoremId::Nesting => "nesting",
            TheoremId::Recurrence => "recurrence",
            TheoremId::CenterStructure => "center",
            TheoremId::GeneratingSequence => "generating-sequence",
            TheoremId::Equicontinuity => "equicontinuity",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    PreconditionUnmet(String),
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::PreconditionUnmet(_) => "precondition-unmet",
        }
    }
}

/// Everything needed to replay a failing instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub graph: String,
    pub map: String,
    pub continua: Vec<String>,
    pub periods: Vec<usize>,
    pub horizon: Option<usize>,
    pub tol: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub theorem: TheoremId,
    pub status: Status,
    pub detail: String,
    /// Instances examined (1 for single checks, more for aggregates).
    pub instances: usize,
    pub seed: Option<u64>,
    pub counterexample: Option<Counterexample>,
}

impl CheckOutcome {
    fn new(theorem: TheoremId, status: Status, detail: impl Into<String>) -> Self {
        CheckOutcome {
            theorem,
            status,
            detail: detail.into(),
            instances: 1,
            seed: None,
            counterexample: None,
        }
    }

    fn unmet(theorem: TheoremId, why: impl Into<String>) -> Self {
        let why = why.into();
        CheckOutcome::new(theorem, Status::PreconditionUnmet(why.clone()), why)
    }

    fn fail(theorem: TheoremId, detail: impl Into<String>, cx: Counterexample) -> Self {
        CheckOutcome {
            counterexample: Some(cx),
            ..CheckOutcome::new(theorem, Status::Fail, detail)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

fn counterexample(f: &PLMap, continua: &[&Continuum], periods: &[usize]) -> Counterexample {
    let g = f.graph();
    Counterexample {
        graph: g.to_text(),
        map: f.to_text(),
        continua: continua.iter().map(|c| c.display(g)).collect(),
        periods: periods.to_vec(),
        horizon: None,
        tol: None,
    }
}

/// A verified cycle of graphs: `K, f(K), …, f^{k−1}(K)` pairwise disjoint
/// and `f^k(K) = K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleOfGraphs {
    pub base: Continuum,
    pub period: usize,
    pub components: Vec<Continuum>,
}

impl CycleOfGraphs {
    pub fn new(f: &PLMap, base: &Continuum, k: usize) -> std::result::Result<Self, String> {
        if k == 0 {
            return Err("period must be at least 1".into());
        }
        let g = f.graph();
        let mut components = vec![base.clone()];
        for _ in 1..k {
            let next = f.image_continuum(components.last().expect("nonempty"));
            components.push(next);
        }
        let back = f.image_continuum(components.last().expect("nonempty"));
        if back != *base {
            return Err(format!("f^{k}(K) = {} differs from K", back.display(g)));
        }
        for j in 0..k {
            for i in 0..j {
                if components[i].intersects(&components[j]) {
                    return Err(format!("f^{i}(K) and f^{j}(K) intersect"));
                }
            }
        }
        Ok(CycleOfGraphs {
            base: base.clone(),
            period: k,
            components,
        })
    }

    /// Index of the component containing `c`, if any.
    pub fn component_containing(&self, c: &Continuum) -> Option<usize> {
        self.components.iter().position(|k| k.contains(c))
    }
}

pub fn verify_cycle_of_graphs(f: &PLMap, k_set: &Continuum, k: usize) -> CheckOutcome {
    match CycleOfGraphs::new(f, k_set, k) {
        Ok(_) => CheckOutcome::new(TheoremId::CycleOfGraphs, Status::Pass, format!("cycle of graphs of period {k}")),
        Err(why) => CheckOutcome::fail(TheoremId::CycleOfGraphs, why, counterexample(f, &[k_set], &[k])),
    }
}

fn divides(p: usize, m: &BigUint) -> bool {
    (m % BigUint::from(p)) == BigUint::from(0u32)
}

/// Exact period with zero preperiod, i.e. `A` itself periodic.
fn periodic(f: &PLMap, a: &Continuum, horizon: usize) -> Option<usize> {
    match detect_exact_period(f, a, horizon) {
        Some((0, p)) => Some(p),
        _ => None,
    }
}

/// If `A` is periodic and contains a fixed point of `f`, its period divides
/// `lcm{1, …, |End(T)|}`.
pub fn check_period_bound(f: &PLMap, a: &Continuum, horizon: usize) -> CheckOutcome {
    let id = TheoremId::PeriodBound;
    let g = f.graph();
    let Ok(m) = g.lcm_end_bound() else {
        return CheckOutcome::unmet(id, "graph is not a tree");
    };
    let Some(p) = periodic(f, a, horizon) else {
        return CheckOutcome::unmet(id, format!("continuum not periodic within {horizon} steps"));
    };
    if !f.fixed_points().meets(a) {
        return CheckOutcome::unmet(id, "continuum contains no fixed point");
    }
    if divides(p, &m) {
        CheckOutcome::new(id, Status::Pass, format!("period {p} divides {m}"))
    } else {
        CheckOutcome::fail(
            id,
            format!("period {p} does not divide {m}"),
            counterexample(f, &[a], &[p]),
        )
    }
}

/// Intersecting periodic `P1`, `P2` with `p1 > m·p2` must satisfy `P1 ⊂ P2`.
pub fn check_nesting(f: &PLMap, p1_set: &Continuum, p2_set: &Continuum, horizon: usize) -> CheckOutcome {
    let id = TheoremId::Nesting;
    let g = f.graph();
    let Ok(m) = g.lcm_end_bound() else {
        return CheckOutcome::unmet(id, "graph is not a tree");
    };
    let (Some(p1), Some(p2)) = (periodic(f, p1_set, horizon), periodic(f, p2_set, horizon)) else {
        return CheckOutcome::unmet(id, "a continuum is not periodic within the horizon");
    };
    nesting_verdict(f, p1_set, p1, p2_set, p2, &m)
}

pub(crate) fn nesting_verdict(
    f: &PLMap,
    p1_set: &Continuum,
    p1: usize,
    p2_set: &Continuum,
    p2: usize,
    m: &BigUint,
) -> CheckOutcome {
    let id = TheoremId::Nesting;
    if !p1_set.intersects(p2_set) {
        return CheckOutcome::unmet(id, "continua are disjoint");
    }
    if BigUint::from(p1) <= m * BigUint::from(p2) {
        return CheckOutcome::unmet(id, format!("p1 = {p1} ≤ {m}·{p2}"));
    }
    if p2_set.contains(p1_set) {
        CheckOutcome::new(id, Status::Pass, format!("P1 ⊂ P2 with p1 = {p1}, p2 = {p2}"))
    } else {
        CheckOutcome::fail(
            id,
            format!("p1 = {p1} > {m}·{p2} but P1 ⊄ P2"),
            counterexample(f, &[p1_set, p2_set], &[p1, p2]),
        )
    }
}

/// For one nondegenerate `A`: recurrence evidence
/// (`min_{1≤n≤horizon} dist_H(f̃^n(A), A) < tol`) forces exact periodicity.
pub fn check_recurrent_continuum(f: &PLMap, a: &Continuum, horizon: usize, tol: &Rational) -> CheckOutcome {
    let id = TheoremId::Recurrence;
    let g = f.graph();
    if !g.is_tree() {
        return CheckOutcome::unmet(id, "graph is not a tree");
    }
    if a.is_degenerate(g) {
        return CheckOutcome::unmet(id, "degenerate continua are exempt");
    }
    let mut cur = a.clone();
    let mut closest: Option<(usize, Rational)> = None;
    for n in 1..=horizon {
        cur = f.image_continuum(&cur);
        if cur == *a {
            return CheckOutcome::new(id, Status::Pass, format!("periodic with period {n}"));
        }
        let d = cur.hausdorff_distance(g, a);
        if closest.as_ref().is_none_or(|(_, best)| d < *best) {
            closest = Some((n, d));
        }
    }
    match closest {
        Some((n, d)) if d < *tol => {
            let mut cx = counterexample(f, &[a], &[]);
            cx.horizon = Some(horizon);
            cx.tol = Some(rational::format(tol));
            CheckOutcome::fail(
                id,
                format!("returns within {} at step {n} but is not periodic", rational::format(&d)),
                cx,
            )
        }
        _ => CheckOutcome::new(id, Status::Pass, "not recurrent within the horizon"),
    }
}

/// Recurrence check over every aligned nondegenerate continuum of a Markov
/// tree map.
pub fn check_recurrence_characterization(
    mm: &crate::pl_map::markov::MarkovMap,
    horizon: usize,
    tol: &Rational,
    opts: &EnumerateOptions,
) -> Result<CheckOutcome> {
    let f = mm.map();
    let g = f.graph();
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let sg = enumerate::StateGraph::build(mm, opts)?;
    let mut examined = 0usize;
    for (i, a) in sg.states.iter().enumerate() {
        if a.is_degenerate(g) {
            continue;
        }
        examined += 1;
        if sg.period[i].is_some() {
            continue;
        }
        // The orbit is eventually periodic in the finite state graph, so the
        // distinct states visited within the horizon are few.
        let mut j = sg.next[i];
        let mut visited = std::collections::HashSet::new();
        for n in 1..=horizon {
            if !visited.insert(j) {
                break;
            }
            let d = sg.states[j].hausdorff_distance(g, a);
            if d < *tol {
                let mut cx = counterexample(f, &[a], &[]);
                cx.horizon = Some(horizon);
                cx.tol = Some(rational::format(tol));
                let mut out = CheckOutcome::fail(
                    TheoremId::Recurrence,
                    format!("{} returns within {} at step {n} but is not periodic", a.display(g), rational::format(&d)),
                    cx,
                );
                out.instances = examined;
                return Ok(out);
            }
            j = sg.next[j];
        }
    }
    let mut out = CheckOutcome::new(
        TheoremId::Recurrence,
        Status::Pass,
        format!("{examined} aligned nondegenerate continua: every recurrent one is periodic"),
    );
    out.instances = examined;
    Ok(out)
}

/// Parses a counterexample and re-runs the predicate that produced it;
/// returns the fresh outcome (a faithful counterexample fails again).
pub fn recheck(theorem: TheoremId, cx: &Counterexample) -> Result<CheckOutcome> {
    let g = Arc::new(formats::parse_graph(&cx.graph)?);
    let f = formats::parse_map(&cx.map, g.clone())?.map;
    let continua = cx
        .continua
        .iter()
        .map(|c| formats::parse_continuum(c, &g))
        .collect::<Result<Vec<_>>>()?;
    let need = |n: usize| -> Result<()> {
        if continua.len() < n {
            Err(Error::InvalidArgument(format!("counterexample needs {n} continua")))
        } else {
            Ok(())
        }
    };
    let horizon = cx
        .horizon
        .unwrap_or_else(|| cx.periods.iter().copied().max().unwrap_or(1).max(DEFAULT_CHECK_HORIZON));
    Ok(match theorem {
        TheoremId::CycleOfGraphs => {
            need(1)?;
            verify_cycle_of_graphs(&f, &continua[0], *cx.periods.first().unwrap_or(&1))
        }
        TheoremId::PeriodBound => {
            need(1)?;
            check_period_bound(&f, &continua[0], horizon)
        }
        TheoremId::Nesting => {
            need(2)?;
            check_nesting(&f, &continua[0], &continua[1], horizon)
        }
        TheoremId::Recurrence => {
            need(1)?;
            let tol = match &cx.tol {
                Some(t) => rational::parse(t)?,
                None => default_recurrence_tol(),
            };
            check_recurrent_continuum(&f, &continua[0], horizon, &tol)
        }
        TheoremId::CenterStructure => {
            need(1)?;
            center::check_core(&f, &continua[0], &center::CenterOptions::default())
        }
        TheoremId::GeneratingSequence => {
            let chain: Vec<(Continuum, usize)> = continua.into_iter().zip(cx.periods.iter().copied()).collect();
            center::verify_chain(&f, &chain)
        }
        TheoremId::Equicontinuity => {
            return Err(Error::InvalidArgument("equicontinuity reports are statistical".into()))
        }
    })
}

/// `lcm` of a list of periods, for reports.
pub fn lcm_of(periods: &[usize]) -> usize {
    periods.iter().fold(1usize, |acc, &p| acc.lcm(&p))
}
