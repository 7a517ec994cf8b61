//! Nested cycles of graphs and the cores at their bottom.
//!
//! A chain `K_1 ⊃ K_2 ⊃ …` of cycle-of-graphs bases with periods
//! `p_1 | p_2 | …` is a generating sequence when every orbit component of
//! `K_n` holds exactly `p_{n+1}/p_n` orbit components of `K_{n+1}`. Cores
//! are the plateaus of `f^{p}` inside the innermost member; they must
//! collapse to periodic orbits.

use std::collections::BTreeSet;

use super::enumerate::{enumerate_periodic_subtrees, EnumerateOptions, PeriodicSubtree};
use super::{counterexample, CheckOutcome, CycleOfGraphs, Status, TheoremId};
use crate::dynamics::{classify, Verdict};
use crate::error::{Error, Result};
use crate::hyperspace::Continuum;
use crate::pl_map::markov::MarkovMap;
use crate::pl_map::{PLMap, DEFAULT_PIECE_CAP};
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct CenterOptions {
    /// Longest chain built.
    pub max_depth: usize,
    pub horizon: usize,
    /// Cores must reach a diameter below this within the horizon.
    pub diameter_tol: Rational,
    pub enumerate: EnumerateOptions,
    pub piece_cap: usize,
}

impl Default for CenterOptions {
    fn default() -> Self {
        CenterOptions {
            max_depth: 4,
            horizon: 5000,
            diameter_tol: rational::inverse_power_of_ten(3),
            enumerate: EnumerateOptions::default(),
            piece_cap: DEFAULT_PIECE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSequence {
    pub cycles: Vec<CycleOfGraphs>,
}

impl GeneratingSequence {
    pub fn periods(&self) -> Vec<usize> {
        self.cycles.iter().map(|c| c.period).collect()
    }

    pub fn innermost(&self) -> &CycleOfGraphs {
        self.cycles.last().expect("chains are nonempty")
    }

    /// Checks nesting, proper divisibility and the component counts.
    pub fn verify(&self) -> std::result::Result<(), String> {
        for w in self.cycles.windows(2) {
            let (outer, inner) = (&w[0], &w[1]);
            if !outer.base.contains(&inner.base) {
                return Err(format!("member of period {} is not nested in its predecessor", inner.period));
            }
            if inner.period <= outer.period || inner.period % outer.period != 0 {
                return Err(format!("{} is not a proper multiple of {}", inner.period, outer.period));
            }
            let ratio = inner.period / outer.period;
            let mut hosts = vec![0usize; outer.period];
            for c in &inner.components {
                match outer.component_containing(c) {
                    Some(i) => hosts[i] += 1,
                    None => {
                        return Err(format!(
                            "an orbit component of the period-{} member leaves the period-{} orbit",
                            inner.period, outer.period
                        ))
                    }
                }
            }
            if let Some(i) = hosts.iter().position(|&n| n != ratio) {
                return Err(format!(
                    "component {i} of the period-{} orbit holds {} components, expected {ratio}",
                    outer.period, hosts[i]
                ));
            }
        }
        Ok(())
    }
}

/// Generating-sequence check for an explicit chain `(K_n, p_n)`.
pub fn verify_chain(f: &PLMap, chain: &[(Continuum, usize)]) -> CheckOutcome {
    let id = TheoremId::GeneratingSequence;
    let cx = || {
        let conts: Vec<&Continuum> = chain.iter().map(|(c, _)| c).collect();
        let periods: Vec<usize> = chain.iter().map(|(_, p)| *p).collect();
        counterexample(f, &conts, &periods)
    };
    let mut cycles = Vec::with_capacity(chain.len());
    for (k, p) in chain {
        match CycleOfGraphs::new(f, k, *p) {
            Ok(c) => cycles.push(c),
            Err(why) => return CheckOutcome::fail(id, format!("not a cycle of graphs: {why}"), cx()),
        }
    }
    let seq = GeneratingSequence { cycles };
    match seq.verify() {
        Ok(()) => CheckOutcome::new(id, Status::Pass, format!("periods {:?}", seq.periods())),
        Err(why) => CheckOutcome::fail(id, why, cx()),
    }
}

/// A core must be asymptotically degenerate and get small within the horizon.
pub fn check_core(f: &PLMap, core: &Continuum, opts: &CenterOptions) -> CheckOutcome {
    let id = TheoremId::CenterStructure;
    let g = f.graph();
    let c = match classify(f, core, opts.horizon, &crate::dynamics::default_tol()) {
        Ok(c) => c,
        Err(e) => return CheckOutcome::unmet(id, e.to_string()),
    };
    let min = c.evidence.diameters.iter().min().cloned().unwrap_or_else(rational::zero);
    let degenerate = matches!(c.verdict, Verdict::AsymptoticallyDegenerate { .. });
    if degenerate && min < opts.diameter_tol {
        CheckOutcome::new(
            id,
            Status::Pass,
            format!("core {} collapses to diameter {}", core.display(g), rational::format(&min)),
        )
    } else {
        let mut cx = counterexample(f, &[core], &[]);
        cx.horizon = Some(opts.horizon);
        CheckOutcome::fail(
            id,
            format!("core {} is {} with least diameter {}", core.display(g), c.verdict.tag(), rational::format(&min)),
            cx,
        )
    }
}

fn extend(f: &PLMap, from: &CycleOfGraphs, pool: &[(PeriodicSubtree, Rational)]) -> Option<CycleOfGraphs> {
    let mut best: Option<(&PeriodicSubtree, &Rational)> = None;
    for (s, len) in pool {
        if s.period <= from.period || s.period % from.period != 0 || !from.base.contains(&s.continuum) {
            continue;
        }
        let better = match best {
            None => true,
            Some((b, blen)) => (s.period, std::cmp::Reverse(len), &s.continuum) < (b.period, std::cmp::Reverse(blen), &b.continuum),
        };
        if better {
            best = Some((s, len));
        }
    }
    best.and_then(|(s, _)| CycleOfGraphs::new(f, &s.continuum, s.period).ok())
}

/// Generating sequences grown greedily from every periodic subtree whose
/// orbit is a cycle of graphs; chains of length one and suffixes of longer
/// chains are dropped.
pub fn generating_sequences(mm: &MarkovMap, opts: &CenterOptions) -> Result<Vec<GeneratingSequence>> {
    let f = mm.map();
    let g = f.graph();
    let pool: Vec<(PeriodicSubtree, Rational)> = enumerate_periodic_subtrees(mm, &opts.enumerate)?
        .into_iter()
        .filter(|s| !s.continuum.is_degenerate(g))
        .filter(|s| CycleOfGraphs::new(f, &s.continuum, s.period).is_ok())
        .map(|s| {
            let len = s.continuum.length(g);
            (s, len)
        })
        .collect();
    let mut chains: Vec<GeneratingSequence> = Vec::new();
    let mut seen: BTreeSet<Vec<Continuum>> = BTreeSet::new();
    for (s, _) in &pool {
        let mut cycles = vec![CycleOfGraphs::new(f, &s.continuum, s.period).expect("filtered")];
        while cycles.len() < opts.max_depth {
            match extend(f, cycles.last().expect("nonempty"), &pool) {
                Some(next) => cycles.push(next),
                None => break,
            }
        }
        if cycles.len() < 2 {
            continue;
        }
        let key: Vec<Continuum> = cycles.iter().map(|c| c.base.clone()).collect();
        if seen.insert(key) {
            chains.push(GeneratingSequence { cycles });
        }
    }
    let keys: Vec<Vec<Continuum>> = chains
        .iter()
        .map(|c| c.cycles.iter().map(|k| k.base.clone()).collect())
        .collect();
    let is_suffix = |i: usize| {
        keys.iter()
            .enumerate()
            .any(|(j, k)| j != i && k.len() > keys[i].len() && k.ends_with(&keys[i]))
    };
    let keep: Vec<bool> = (0..chains.len()).map(|i| !is_suffix(i)).collect();
    let mut out: Vec<GeneratingSequence> = chains
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect();
    out.sort_by(|a, b| a.cycles[0].base.cmp(&b.cycles[0].base));
    Ok(out)
}

/// Nondegenerate plateaus of `f^p` inside the innermost member.
pub fn cores(f: &PLMap, seq: &GeneratingSequence, piece_cap: usize) -> Result<Vec<Continuum>> {
    let g = f.graph();
    let inner = seq.innermost();
    let h = f.compose_power(inner.period, piece_cap)?;
    let mut out: Vec<Continuum> = Vec::new();
    for e in g.edge_ids() {
        for piece in h.pieces(e) {
            if !piece.path.is_constant() || piece.lo == piece.hi {
                continue;
            }
            let plateau = Continuum::segment(g, e, piece.lo.clone(), piece.hi.clone())?;
            if let Some(part) = plateau.intersection(g, &inner.base)? {
                if !part.is_degenerate(g) {
                    out.push(part);
                }
            }
        }
    }
    // Touching plateaus with one value form a single core.
    let mut merged: Vec<Continuum> = Vec::new();
    for c in out {
        let value = h.image_continuum(&c);
        if let Some(m) = merged
            .iter_mut()
            .find(|m| m.intersects(&c) && h.image_continuum(m) == value)
        {
            *m = m.union(g, &c)?;
        } else {
            merged.push(c);
        }
    }
    merged.sort();
    Ok(merged)
}

#[derive(Debug, Clone)]
pub struct CenterReport {
    pub chains: Vec<GeneratingSequence>,
    pub cores: Vec<Continuum>,
    /// Core dynamics and disjointness.
    pub structure: CheckOutcome,
    pub generating: CheckOutcome,
}

pub fn check_center_structure(mm: &MarkovMap, opts: &CenterOptions) -> Result<CenterReport> {
    let f = mm.map();
    let g = f.graph();
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let chains = generating_sequences(mm, opts)?;
    let mut generating = CheckOutcome::new(
        TheoremId::GeneratingSequence,
        Status::Pass,
        format!("{} chains verified", chains.len()),
    );
    generating.instances = chains.len();
    for seq in &chains {
        let chain: Vec<(Continuum, usize)> = seq.cycles.iter().map(|c| (c.base.clone(), c.period)).collect();
        let out = verify_chain(f, &chain);
        if !out.passed() {
            generating = out;
            break;
        }
    }
    if chains.is_empty() {
        generating = CheckOutcome::unmet(TheoremId::GeneratingSequence, "no nested cycles of graphs found");
    }
    let mut all_cores: Vec<Continuum> = Vec::new();
    let mut structure = CheckOutcome::new(TheoremId::CenterStructure, Status::Pass, String::new());
    let mut checked = 0usize;
    'chains: for seq in &chains {
        let found = cores(f, seq, opts.piece_cap)?;
        if found.is_empty() {
            let inner = seq.innermost();
            let c = classify(f, &inner.base, opts.horizon, &crate::dynamics::default_tol())?;
            checked += 1;
            if !matches!(c.verdict, Verdict::ExactlyPeriodic { .. }) {
                structure = CheckOutcome::fail(
                    TheoremId::CenterStructure,
                    format!("coreless innermost member is {}", c.verdict.tag()),
                    counterexample(f, &[&inner.base], &[inner.period]),
                );
                break;
            }
            continue;
        }
        for core in found {
            checked += 1;
            let out = check_core(f, &core, opts);
            if !out.passed() {
                structure = out;
                break 'chains;
            }
            if let Some(other) = all_cores.iter().find(|o| **o != core && o.intersects(&core)) {
                structure = CheckOutcome::fail(
                    TheoremId::CenterStructure,
                    format!("cores {} and {} overlap without being equal", other.display(g), core.display(g)),
                    counterexample(f, &[other, &core], &[]),
                );
                break 'chains;
            }
            if !all_cores.contains(&core) {
                all_cores.push(core);
            }
        }
    }
    if structure.passed() {
        structure.detail = format!("{} chains, {} distinct cores, all degenerate", chains.len(), all_cores.len());
    }
    if chains.is_empty() {
        structure = CheckOutcome::unmet(TheoremId::CenterStructure, "no nested cycles of graphs found");
    }
    structure.instances = checked;
    all_cores.sort();
    Ok(CenterReport {
        chains,
        cores: all_cores,
        structure,
        generating,
    })
}

/// The union of the orbit of each core, for display.
pub fn core_orbit(f: &PLMap, core: &Continuum, steps: usize) -> Vec<Continuum> {
    let mut out = vec![core.clone()];
    for _ in 1..steps {
        let next = f.image_continuum(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}
