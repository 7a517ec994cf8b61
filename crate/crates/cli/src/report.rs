//! Report model written as JSON.
//!
//! Rationals are `p/q` strings and continua are literals, so reports are
//! byte-stable for a given scenario and seed.

use hyperdyn_core::checkers::{CheckOutcome, Counterexample, Status};
use hyperdyn_core::dynamics::{Classification, Verdict};
use hyperdyn_core::rational::{self, Rational};
use hyperdyn_core::{Continuum, Graph};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "hyperdyn-report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub scenario: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapInfo>,
    pub analyses: Vec<AnalysisReport>,
}

impl Report {
    /// Every check across all analyses.
    pub fn checks(&self) -> impl Iterator<Item = (&AnalysisReport, &CheckReport)> {
        self.analyses.iter().flat_map(|a| a.checks.iter().map(move |c| (a, c)))
    }

    pub fn any_failed(&self) -> bool {
        self.checks().any(|(_, c)| c.status == "fail")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapInfo {
    pub name: String,
    pub approximate: bool,
    pub edges: usize,
    pub vertices: usize,
    pub tree: bool,
    pub endpoints: usize,
    /// `lcm{1, …, |End|}` for trees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_bound: Option<String>,
    pub markov_cells: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuum: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<PeriodReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub periodic: Vec<PeriodicEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<Vec<PeriodicEntry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cores: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<ProbeReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counts: Vec<(String, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub found: bool,
    pub horizon: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preperiod: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicEntry {
    pub period: usize,
    pub continuum: String,
}

/// A verdict as a tagged enum; fields depend on the tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum VerdictReport {
    ExactlyPeriodic {
        period: usize,
        preperiod: usize,
    },
    AsymptoticallyPeriodic {
        period: usize,
        limit: Vec<String>,
        residual: String,
    },
    AsymptoticallyDegenerate {
        period: usize,
        limit: Vec<String>,
        residual: String,
    },
    WanderingWitnessed {
        horizon: usize,
        final_diameter: String,
    },
    Inconclusive {
        horizon: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
}

impl VerdictReport {
    pub fn tag(&self) -> &'static str {
        match self {
            VerdictReport::ExactlyPeriodic { .. } => "ExactlyPeriodic",
            VerdictReport::AsymptoticallyPeriodic { .. } => "AsymptoticallyPeriodic",
            VerdictReport::AsymptoticallyDegenerate { .. } => "AsymptoticallyDegenerate",
            VerdictReport::WanderingWitnessed { .. } => "WanderingWitnessed",
            VerdictReport::Inconclusive { .. } => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub horizon: usize,
    pub tol: String,
    pub verdict: VerdictReport,
    pub steps: usize,
    /// Phase origin of `limit_cycle`: iterate `n` tracks
    /// `limit_cycle[(n − origin) mod len]`.
    pub limit_origin: usize,
    pub limit_cycle: Vec<String>,
    pub orbit: Vec<OrbitRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub n: usize,
    pub diameter: String,
    /// `dist_H` to the matching phase of the limit cycle, when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist_to_limit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub gamma: String,
    pub center: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub samples: usize,
    pub worst: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem: String,
    /// `pass`, `fail` or `precondition-unmet`.
    pub status: String,
    pub detail: String,
    pub instances: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub graph: String,
    pub map: String,
    pub continua: Vec<String>,
    pub periods: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<String>,
}

impl From<&Counterexample> for CounterexampleReport {
    fn from(cx: &Counterexample) -> Self {
        CounterexampleReport {
            graph: cx.graph.clone(),
            map: cx.map.clone(),
            continua: cx.continua.clone(),
            periods: cx.periods.clone(),
            horizon: cx.horizon,
            tol: cx.tol.clone(),
        }
    }
}

impl From<&CounterexampleReport> for Counterexample {
    fn from(cx: &CounterexampleReport) -> Self {
        Counterexample {
            graph: cx.graph.clone(),
            map: cx.map.clone(),
            continua: cx.continua.clone(),
            periods: cx.periods.clone(),
            horizon: cx.horizon,
            tol: cx.tol.clone(),
        }
    }
}

impl From<&CheckOutcome> for CheckReport {
    fn from(o: &CheckOutcome) -> Self {
        CheckReport {
            theorem: o.theorem.as_str().to_string(),
            status: o.status.as_str().to_string(),
            detail: o.detail.clone(),
            instances: o.instances,
            seed: o.seed,
            counterexample: o.counterexample.as_ref().map(Into::into),
        }
    }
}

impl CheckReport {
    /// A check that is not backed by a single checker outcome.
    pub fn summary(theorem: &str, passed: bool, detail: String, instances: usize, seed: Option<u64>) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        CheckReport {
            theorem: theorem.to_string(),
            status: status.as_str().to_string(),
            detail,
            instances,
            seed,
            counterexample: None,
        }
    }
}

pub fn verdict_report(v: &Verdict, g: &Graph) -> VerdictReport {
    let fmt = rational::format;
    match v {
        Verdict::ExactlyPeriodic { period, preperiod } => VerdictReport::ExactlyPeriodic {
            period: *period,
            preperiod: *preperiod,
        },
        Verdict::AsymptoticallyPeriodic {
            period,
            limit,
            residual,
        } => VerdictReport::AsymptoticallyPeriodic {
            period: *period,
            limit: limit.iter().map(|c| c.display(g)).collect(),
            residual: fmt(residual),
        },
        Verdict::AsymptoticallyDegenerate {
            period,
            limit,
            residual,
        } => VerdictReport::AsymptoticallyDegenerate {
            period: *period,
            limit: limit.iter().map(|p| Continuum::point(g, p).display(g)).collect(),
            residual: fmt(residual),
        },
        Verdict::WanderingWitnessed {
            horizon,
            final_diameter,
        } => VerdictReport::WanderingWitnessed {
            horizon: *horizon,
            final_diameter: fmt(final_diameter),
        },
        Verdict::Inconclusive { horizon, note } => VerdictReport::Inconclusive {
            horizon: *horizon,
            note: note.clone(),
        },
    }
}

/// Builds the classification block; `orbit` holds the iterates backing the
/// evidence, `A` first.
pub fn classification_report(
    c: &Classification,
    orbit: &[Continuum],
    g: &Graph,
    horizon: usize,
    tol: &Rational,
) -> ClassificationReport {
    let ev = &c.evidence;
    let limit = &ev.limit_cycle;
    let rows = ev
        .diameters
        .iter()
        .enumerate()
        .map(|(n, d)| {
            let dist_to_limit = (!limit.is_empty()).then(|| {
                let phase = (n as i64 - ev.limit_origin as i64).rem_euclid(limit.len() as i64) as usize;
                rational::format(&orbit[n].hausdorff_distance(g, &limit[phase]))
            });
            OrbitRow {
                n,
                diameter: rational::format(d),
                dist_to_limit,
            }
        })
        .collect();
    ClassificationReport {
        horizon,
        tol: rational::format(tol),
        verdict: verdict_report(&c.verdict, g),
        steps: ev.steps,
        limit_origin: ev.limit_origin,
        limit_cycle: limit.iter().map(|l| l.display(g)).collect(),
        orbit: rows,
    }
}
