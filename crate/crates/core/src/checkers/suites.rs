//! Checks run across the seeded random corpus.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::enumerate::{EnumerateOptions, StateGraph};
use super::random::{map_for_seed, RandomMapConfig};
use super::{counterexample, divides, nesting_verdict, CheckOutcome, Status, TheoremId};
use crate::dynamics::{classify_with, ClassifyOptions, Verdict};
use crate::error::Result;
use crate::hyperspace::sample;
use crate::pl_map::markov::MarkovMap;
use crate::rational::Rational;

/// Mixed into corpus seeds when drawing sample continua, so the continuum
/// stream is independent of the map stream.
const CONTINUUM_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub maps: usize,
    pub period_bound: CheckOutcome,
    pub nesting: CheckOutcome,
}

#[derive(Debug, Default)]
struct MapTally {
    bound_checked: usize,
    bound_failure: Option<CheckOutcome>,
    nesting_checked: usize,
    nesting_failure: Option<CheckOutcome>,
}

fn tally_map(mm: &MarkovMap, opts: &EnumerateOptions) -> Result<MapTally> {
    let f = mm.map();
    let g = f.graph();
    let m: BigUint = g.lcm_end_bound()?;
    let sg = StateGraph::build(mm, opts)?;
    let periodic = sg.periodic();
    let fixed = f.fixed_points();
    let mut t = MapTally::default();
    for s in &periodic {
        if !fixed.meets(&s.continuum) {
            continue;
        }
        t.bound_checked += 1;
        if !divides(s.period, &m) && t.bound_failure.is_none() {
            t.bound_failure = Some(CheckOutcome::fail(
                TheoremId::PeriodBound,
                format!("period {} does not divide {m}", s.period),
                counterexample(f, &[&s.continuum], &[s.period]),
            ));
        }
    }
    // `periodic` is sorted by period, so candidates for P1 sit at the tail.
    for p2 in &periodic {
        let threshold = &m * BigUint::from(p2.period);
        for p1 in periodic.iter().rev() {
            if BigUint::from(p1.period) <= threshold {
                break;
            }
            if !p1.continuum.intersects(&p2.continuum) {
                continue;
            }
            t.nesting_checked += 1;
            let out = nesting_verdict(f, &p1.continuum, p1.period, &p2.continuum, p2.period, &m);
            if out.failed() && t.nesting_failure.is_none() {
                t.nesting_failure = Some(out);
            }
        }
    }
    Ok(t)
}

fn aggregate(
    theorem: TheoremId,
    seed_base: u64,
    maps: usize,
    checked: usize,
    failure: Option<(u64, CheckOutcome)>,
    what: &str,
) -> CheckOutcome {
    match failure {
        Some((seed, mut out)) => {
            out.instances = checked;
            out.seed = Some(seed);
            out
        }
        None => CheckOutcome {
            theorem,
            status: Status::Pass,
            detail: format!("{maps} maps, {checked} {what}, no failures"),
            instances: checked,
            seed: Some(seed_base),
            counterexample: None,
        },
    }
}

/// Period bound and nesting over maps `seed_base..seed_base + count`.
pub fn run_corpus(
    seed_base: u64,
    count: usize,
    cfg: &RandomMapConfig,
    opts: &EnumerateOptions,
) -> Result<CorpusReport> {
    let tallies: Vec<(u64, MapTally)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let seed = seed_base.wrapping_add(i);
            let mm = map_for_seed(seed, cfg)?;
            Ok((seed, tally_map(&mm, opts)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bound_checked = 0;
    let mut nesting_checked = 0;
    let mut bound_failure = None;
    let mut nesting_failure = None;
    for (seed, t) in tallies {
        bound_checked += t.bound_checked;
        nesting_checked += t.nesting_checked;
        if bound_failure.is_none() {
            bound_failure = t.bound_failure.map(|o| (seed, o));
        }
        if nesting_failure.is_none() {
            nesting_failure = t.nesting_failure.map(|o| (seed, o));
        }
    }
    Ok(CorpusReport {
        maps: count,
        period_bound: aggregate(
            TheoremId::PeriodBound,
            seed_base,
            count,
            bound_checked,
            bound_failure,
            "periodic subtrees with a fixed point",
        ),
        nesting: aggregate(
            TheoremId::Nesting,
            seed_base,
            count,
            nesting_checked,
            nesting_failure,
            "intersecting pairs with p1 > m·p2",
        ),
    })
}

#[derive(Debug, Clone)]
pub struct TrichotomyReport {
    pub pairs: usize,
    /// Verdict tag counts.
    pub counts: BTreeMap<&'static str, usize>,
    /// `(seed, continuum)` of every inconclusive pair.
    pub inconclusive: Vec<(u64, String)>,
    /// Nondegenerate wandering pairs whose diameters failed to decrease
    /// over the horizon.
    pub non_shrinking_wanderers: Vec<u64>,
}

impl TrichotomyReport {
    pub fn passed(&self) -> bool {
        self.inconclusive.is_empty() && self.non_shrinking_wanderers.is_empty()
    }
}

/// Classifies one sampled continuum for each corpus map.
pub fn trichotomy_suite(
    seed_base: u64,
    pairs: usize,
    cfg: &RandomMapConfig,
    opts: &ClassifyOptions,
    denominator: i64,
) -> Result<TrichotomyReport> {
    let rows: Vec<(u64, &'static str, Option<String>, bool)> = (0..pairs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = seed_base.wrapping_add(i);
            let mm = map_for_seed(seed, cfg)?;
            let f = mm.map();
            let g = f.graph();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ CONTINUUM_STREAM);
            let a = sample::continuum(&mut rng, g, denominator);
            let c = classify_with(f, &a, opts)?;
            let tag = c.verdict.tag();
            let shown = matches!(c.verdict, Verdict::Inconclusive { .. }).then(|| a.display(g));
            let bad_wanderer = match &c.verdict {
                Verdict::WanderingWitnessed { final_diameter, .. } => {
                    let first: &Rational = &c.evidence.diameters[0];
                    !a.is_degenerate(g) && final_diameter >= first
                }
                _ => false,
            };
            Ok((seed, tag, shown, bad_wanderer))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = TrichotomyReport {
        pairs,
        counts: BTreeMap::new(),
        inconclusive: Vec::new(),
        non_shrinking_wanderers: Vec::new(),
    };
    for (seed, tag, shown, bad) in rows {
        *report.counts.entry(tag).or_default() += 1;
        if let Some(s) = shown {
            report.inconclusive.push((seed, s));
        }
        if bad {
            report.non_shrinking_wanderers.push(seed);
        }
    }
    Ok(report)
}

/// Recurrence over the aligned continua of every corpus map.
pub fn recurrence_suite(
    seed_base: u64,
    count: usize,
    cfg: &RandomMapConfig,
    horizon: usize,
    tol: &Rational,
    opts: &EnumerateOptions,
) -> Result<CheckOutcome> {
    let outcomes: Vec<(u64, CheckOutcome)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let seed = seed_base.wrapping_add(i);
            let mm = map_for_seed(seed, cfg)?;
            Ok((seed, super::check_recurrence_characterization(&mm, horizon, tol, opts)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let checked = outcomes.iter().map(|(_, o)| o.instances).sum();
    let failure = outcomes.into_iter().find(|(_, o)| o.failed());
    Ok(aggregate(
        TheoremId::Recurrence,
        seed_base,
        count,
        checked,
        failure,
        "aligned nondegenerate continua",
    ))
}
