//! Executes the analyses of a scenario and assembles the report.

use std::path::Path;

use hyperdyn_core::checkers::center::{check_center_structure, CenterOptions};
use hyperdyn_core::checkers::equicontinuity::{probe_equicontinuity, ProbeOptions};
use hyperdyn_core::checkers::random::RandomMapConfig;
use hyperdyn_core::checkers::suites::{run_corpus, trichotomy_suite};
use hyperdyn_core::checkers::{
    check_nesting, check_period_bound, check_recurrence_characterization, check_recurrent_continuum,
    default_recurrence_tol, enumerate_periodic_subtrees, verify_cycle_of_graphs, CheckOutcome, EnumerateOptions,
    DEFAULT_CHECK_HORIZON, DEFAULT_RECURRENCE_HORIZON,
};
use hyperdyn_core::dynamics::{self, classify_with, detect_exact_period, ClassifyOptions};
use hyperdyn_core::hyperspace::induced_step;
use hyperdyn_core::pl_map::markov::MarkovMap;
use hyperdyn_core::rational;
use hyperdyn_core::Continuum;
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::report::{
    classification_report, AnalysisReport, CheckReport, MapInfo, PeriodReport, PeriodicEntry, ProbeReport, Report,
    FORMAT,
};
use crate::scenario::{positive, Analysis, Scenario};
use crate::source::LoadedMap;
use crate::SEED_ENV;

/// Default horizon for `detect-period`.
pub const DETECT_HORIZON: usize = 10_000;
/// Sample continua in the trichotomy suite have endpoints on this grid.
pub const DEFAULT_DENOMINATOR: i64 = 12;

/// `--seed` beats `HYPERDYN_SEED`, which beats the scenario seed; 0 if none.
pub fn resolve_seed(flag: Option<u64>, scenario: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(text) = std::env::var(SEED_ENV) {
        return text
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("{SEED_ENV}={text} is not an unsigned integer")));
    }
    Ok(scenario.unwrap_or(0))
}

struct Context<'a> {
    scenario: &'a Scenario,
    map: Option<&'a LoadedMap>,
    seed: u64,
}

impl Context<'_> {
    fn map(&self) -> &LoadedMap {
        self.map.expect("validated: analyses needing a map have one")
    }

    fn markov(&self) -> CliResult<&MarkovMap> {
        self.map().markov.as_ref().ok_or_else(|| {
            CliError::Invalid(format!(
                "{} has no Markov grid; add `grid` lines to the map file",
                self.map().name
            ))
        })
    }

    fn continuum(&self, reference: &str) -> CliResult<Continuum> {
        self.scenario.continuum(reference, self.map().map.graph())
    }

    fn literal(&self, c: &Continuum) -> String {
        c.display(self.map().map.graph())
    }
}

fn map_info(m: &LoadedMap) -> MapInfo {
    let g = m.map.graph();
    MapInfo {
        name: m.name.clone(),
        approximate: m.approximate,
        edges: g.edge_count(),
        vertices: g.vertex_count(),
        tree: g.is_tree(),
        endpoints: g.endpoint_count(),
        period_bound: g.lcm_end_bound().ok().map(|m| m.to_string()),
        markov_cells: m.markov.as_ref().map(|mm| mm.cells().len()),
    }
}

/// First failure, else a pass over the non-vacuous outcomes, else unmet.
fn aggregate(theorem: &str, outcomes: &[CheckOutcome], what: &str) -> CheckReport {
    if let Some(f) = outcomes.iter().find(|o| o.failed()) {
        let mut r = CheckReport::from(f);
        r.instances = outcomes.len();
        return r;
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    let mut r = CheckReport::summary(
        theorem,
        true,
        format!("{passed} {what} checked, {} vacuous", outcomes.len() - passed),
        passed,
        None,
    );
    if passed == 0 {
        r.status = "precondition-unmet".to_string();
        r.detail = format!("no {what} satisfy the hypotheses");
    }
    r
}

fn run_analysis(cx: &Context, a: &Analysis) -> CliResult<AnalysisReport> {
    let mut out = AnalysisReport {
        kind: a.kind().to_string(),
        ..AnalysisReport::default()
    };
    match a {
        Analysis::Classify { continuum, horizon, tol } => {
            let f = &cx.map().map;
            let c = cx.continuum(continuum)?;
            let opts = ClassifyOptions {
                horizon: horizon.unwrap_or(dynamics::DEFAULT_HORIZON),
                tol: match tol {
                    Some(t) => positive(t, "tol")?,
                    None => dynamics::default_tol(),
                },
                ..ClassifyOptions::default()
            };
            let result = classify_with(f, &c, &opts)?;
            let mut orbit = vec![c.clone()];
            while orbit.len() < result.evidence.steps {
                orbit.push(induced_step(f, orbit.last().expect("nonempty")));
            }
            out.continuum = Some(cx.literal(&c));
            out.classification = Some(classification_report(&result, &orbit, f.graph(), opts.horizon, &opts.tol));
        }
        Analysis::DetectPeriod { continuum, horizon } => {
            let c = cx.continuum(continuum)?;
            let horizon = horizon.unwrap_or(DETECT_HORIZON);
            let found = detect_exact_period(&cx.map().map, &c, horizon);
            out.continuum = Some(cx.literal(&c));
            out.period = Some(PeriodReport {
                found: found.is_some(),
                horizon,
                preperiod: found.map(|(m, _)| m),
                period: found.map(|(_, p)| p),
            });
        }
        Analysis::PeriodBound { continuum, horizon } => {
            let f = &cx.map().map;
            let horizon = horizon.unwrap_or(DEFAULT_CHECK_HORIZON);
            match continuum {
                Some(r) => {
                    let c = cx.continuum(r)?;
                    out.continuum = Some(cx.literal(&c));
                    out.checks.push((&check_period_bound(f, &c, horizon)).into());
                }
                None => {
                    let subtrees = enumerate_periodic_subtrees(cx.markov()?, &EnumerateOptions::default())?;
                    let outcomes: Vec<CheckOutcome> = subtrees
                        .iter()
                        .map(|s| check_period_bound(f, &s.continuum, s.period))
                        .collect();
                    out.checks.push(aggregate("period-bound", &outcomes, "periodic subtrees"));
                }
            }
        }
        Analysis::Nesting { p1, p2, horizon } => {
            let f = &cx.map().map;
            let horizon = horizon.unwrap_or(DEFAULT_CHECK_HORIZON);
            match (p1, p2) {
                (Some(a1), Some(a2)) => {
                    let (c1, c2) = (cx.continuum(a1)?, cx.continuum(a2)?);
                    out.checks.push((&check_nesting(f, &c1, &c2, horizon)).into());
                }
                (None, None) => {
                    let m = f.graph().lcm_end_bound()?;
                    let subtrees = enumerate_periodic_subtrees(cx.markov()?, &EnumerateOptions::default())?;
                    let mut outcomes = Vec::new();
                    for s1 in &subtrees {
                        for s2 in &subtrees {
                            let big = BigUint::from(s1.period) > &m * BigUint::from(s2.period);
                            if big && s1.continuum.intersects(&s2.continuum) {
                                let h = s1.period.max(s2.period);
                                outcomes.push(check_nesting(f, &s1.continuum, &s2.continuum, h));
                            }
                        }
                    }
                    out.checks.push(aggregate("nesting", &outcomes, "intersecting pairs with p1 > m·p2"));
                }
                _ => return Err(CliError::Invalid("nesting needs both p1 and p2, or neither".into())),
            }
        }
        Analysis::Recurrence { continuum, horizon, tol } => {
            let f = &cx.map().map;
            let horizon = horizon.unwrap_or(DEFAULT_RECURRENCE_HORIZON);
            let tol = match tol {
                Some(t) => positive(t, "tol")?,
                None => default_recurrence_tol(),
            };
            let outcome = match continuum {
                Some(r) => {
                    let c = cx.continuum(r)?;
                    out.continuum = Some(cx.literal(&c));
                    check_recurrent_continuum(f, &c, horizon, &tol)
                }
                None => check_recurrence_characterization(cx.markov()?, horizon, &tol, &EnumerateOptions::default())?,
            };
            out.checks.push((&outcome).into());
        }
        Analysis::CycleOfGraphs { continuum, period } => {
            let c = cx.continuum(continuum)?;
            out.continuum = Some(cx.literal(&c));
            out.checks.push((&verify_cycle_of_graphs(&cx.map().map, &c, *period)).into());
        }
        Analysis::Center { max_depth, horizon } => {
            let defaults = CenterOptions::default();
            let opts = CenterOptions {
                max_depth: max_depth.unwrap_or(defaults.max_depth),
                horizon: horizon.unwrap_or(defaults.horizon),
                ..defaults
            };
            let r = check_center_structure(cx.markov()?, &opts)?;
            let g = cx.map().map.graph();
            out.chains = r
                .chains
                .iter()
                .map(|seq| {
                    seq.cycles
                        .iter()
                        .map(|c| PeriodicEntry {
                            period: c.period,
                            continuum: c.base.display(g),
                        })
                        .collect()
                })
                .collect();
            out.cores = r.cores.iter().map(|c| c.display(g)).collect();
            out.checks.push((&r.generating).into());
            out.checks.push((&r.structure).into());
        }
        Analysis::Equicontinuity {
            subtree,
            eps,
            gammas,
            horizon,
            samples,
        } => {
            let defaults = ProbeOptions::default();
            let opts = ProbeOptions {
                eps: match eps {
                    Some(e) => positive(e, "eps")?,
                    None => defaults.eps.clone(),
                },
                gammas: match gammas {
                    Some(gs) => gs.iter().map(|g| positive(g, "gamma")).collect::<CliResult<_>>()?,
                    None => defaults.gammas.clone(),
                },
                horizon: horizon.unwrap_or(defaults.horizon),
                samples: samples.unwrap_or(defaults.samples),
                seed: cx.seed,
                ..defaults
            };
            let u = cx.continuum(subtree)?;
            let g = cx.map().map.graph();
            let r = probe_equicontinuity(&cx.map().map, &u, &opts)?;
            out.continuum = Some(cx.literal(&u));
            out.probes = r
                .probes
                .iter()
                .map(|p| ProbeReport {
                    gamma: rational::format(&p.gamma),
                    center: p.center.display(g),
                    delta: p.delta.as_ref().map(rational::format),
                    samples: p.samples,
                    worst: rational::format(&p.worst),
                    witness: p.witness.as_ref().map(|w| w.display(g)),
                })
                .collect();
            out.checks.push((&r.outcome).into());
        }
        Analysis::EnumeratePeriodic {} => {
            let g = cx.map().map.graph();
            out.periodic = enumerate_periodic_subtrees(cx.markov()?, &EnumerateOptions::default())?
                .into_iter()
                .map(|s| PeriodicEntry {
                    period: s.period,
                    continuum: s.continuum.display(g),
                })
                .collect();
        }
        Analysis::Corpus { count } => {
            let r = run_corpus(cx.seed, *count, &RandomMapConfig::default(), &EnumerateOptions::default())?;
            out.checks.push((&r.period_bound).into());
            out.checks.push((&r.nesting).into());
        }
        Analysis::Trichotomy {
            pairs,
            horizon,
            tol,
            denominator,
        } => {
            let opts = ClassifyOptions {
                horizon: horizon.unwrap_or(dynamics::DEFAULT_HORIZON),
                tol: match tol {
                    Some(t) => positive(t, "tol")?,
                    None => dynamics::default_tol(),
                },
                ..ClassifyOptions::default()
            };
            let denominator = denominator.unwrap_or(DEFAULT_DENOMINATOR);
            let r = trichotomy_suite(cx.seed, *pairs, &RandomMapConfig::default(), &opts, denominator)?;
            out.counts = r.counts.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            let detail = if r.passed() {
                format!("{pairs} pairs, none inconclusive, every wandering continuum shrank")
            } else {
                format!(
                    "inconclusive seeds {:?}, non-shrinking wanderer seeds {:?}",
                    r.inconclusive.iter().map(|(s, _)| *s).collect::<Vec<_>>(),
                    r.non_shrinking_wanderers
                )
            };
            out.checks
                .push(CheckReport::summary("trichotomy", r.passed(), detail, *pairs, Some(cx.seed)));
        }
    }
    Ok(out)
}

/// Runs every analysis in order; relative map paths resolve against `base`.
pub fn run_scenario(s: &Scenario, base: &Path, seed: u64) -> CliResult<Report> {
    s.validate()?;
    let loaded = s.map.as_ref().map(|m| m.load(base)).transpose()?;
    let cx = Context {
        scenario: s,
        map: loaded.as_ref(),
        seed,
    };
    let analyses = s
        .analyses
        .iter()
        .map(|a| run_analysis(&cx, a))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Report {
        format: FORMAT.to_string(),
        scenario: s.name.clone(),
        seed,
        map: loaded.as_ref().map(map_info),
        analyses,
    })
}

/// Runs independent scenarios on the rayon pool, preserving input order.
pub fn run_batch(jobs: &[(Scenario, std::path::PathBuf, u64)]) -> Vec<CliResult<Report>> {
    jobs.par_iter().map(|(s, base, seed)| run_scenario(s, base, *seed)).collect()
}
