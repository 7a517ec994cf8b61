//! Orbits of continua under the induced map and their classification.
//!
//! Verdicts are reported in a fixed order of strength: an exact cycle beats
//! numerical asymptotic periodicity, which beats a finite-horizon wandering
//! certificate. Everything past the exact cycle is evidence, not proof.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hyperspace::{induced_step, Continuum};
use crate::metric_graph::Point;
use crate::pl_map::PLMap;
use crate::rational::{self, Rational};

pub const DEFAULT_HORIZON: usize = 2000;
pub const DEFAULT_PERIOD_CAP: usize = 64;
/// Above this horizon only power-of-two steps (and the last) keep snapshots.
pub const THINNING_THRESHOLD: usize = 10_000;
pub const DEFAULT_INTERVAL_CAP: usize = 100_000;

/// `1/10^6`.
pub fn default_tol() -> Rational {
    rational::inverse_power_of_ten(6)
}

#[derive(Debug, Clone)]
pub struct OrbitOptions {
    pub horizon: usize,
    pub thin_above: usize,
    pub interval_cap: usize,
    pub record_intersections: bool,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            horizon: DEFAULT_HORIZON,
            thin_above: THINNING_THRESHOLD,
            interval_cap: DEFAULT_INTERVAL_CAP,
            record_intersections: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub initial: Continuum,
    pub horizon: usize,
    /// `(n, f̃^n(A))`; every step when `horizon` is below the thinning
    /// threshold.
    pub snapshots: Vec<(usize, Continuum)>,
    /// Diameter of every iterate `0..=horizon`.
    pub diameters: Vec<Rational>,
    /// Pairs `j < k` with `f̃^j(A) ∩ f̃^k(A) ≠ ∅`, when requested.
    pub intersections: Option<Vec<(usize, usize)>>,
}

fn checked_step(f: &PLMap, a: &Continuum, cap: usize) -> Result<Continuum> {
    let next = induced_step(f, a);
    if next.interval_count() > cap {
        return Err(Error::ResourceCap(format!(
            "continuum with {} intervals exceeds cap {cap}",
            next.interval_count()
        )));
    }
    Ok(next)
}

pub fn iterate_orbit(f: &PLMap, a: &Continuum, horizon: usize) -> Result<OrbitReport> {
    iterate_orbit_with(
        f,
        a,
        &OrbitOptions {
            horizon,
            ..OrbitOptions::default()
        },
    )
}

pub fn iterate_orbit_with(f: &PLMap, a: &Continuum, opts: &OrbitOptions) -> Result<OrbitReport> {
    if opts.horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    if opts.record_intersections && opts.horizon > opts.thin_above {
        return Err(Error::ResourceCap(format!(
            "intersection matrix limited to horizons ≤ {}",
            opts.thin_above
        )));
    }
    let g = f.graph();
    let keep_all = opts.horizon <= opts.thin_above;
    let mut snapshots = Vec::new();
    let mut diameters = Vec::with_capacity(opts.horizon + 1);
    let mut cur = a.clone();
    for n in 0..=opts.horizon {
        diameters.push(cur.diameter(g));
        if keep_all || n.is_power_of_two() || n == 0 || n == opts.horizon {
            snapshots.push((n, cur.clone()));
        }
        if n < opts.horizon {
            cur = checked_step(f, &cur, opts.interval_cap)?;
        }
    }
    let intersections = opts.record_intersections.then(|| {
        let mut pairs = Vec::new();
        for k in 0..snapshots.len() {
            for j in 0..k {
                if snapshots[j].1.intersects(&snapshots[k].1) {
                    pairs.push((j, k));
                }
            }
        }
        pairs
    });
    Ok(OrbitReport {
        initial: a.clone(),
        horizon: opts.horizon,
        snapshots,
        diameters,
        intersections,
    })
}

/// An orbit prefix, stopped at the first exact repetition.
struct Trajectory {
    orbit: Vec<Continuum>,
    cycle: Option<(usize, usize)>,
}

impl Trajectory {
    fn compute(f: &PLMap, a: &Continuum, horizon: usize, cap: usize) -> Result<Self> {
        let mut seen: HashMap<Continuum, usize> = HashMap::new();
        let mut orbit = Vec::new();
        let mut cur = a.clone();
        for n in 0..=horizon {
            if let Some(&m) = seen.get(&cur) {
                return Ok(Trajectory {
                    orbit,
                    cycle: Some((m, n - m)),
                });
            }
            seen.insert(cur.clone(), n);
            orbit.push(cur.clone());
            if n < horizon {
                cur = checked_step(f, &cur, cap)?;
            }
        }
        Ok(Trajectory { orbit, cycle: None })
    }
}

/// Minimal `(m, p)` with `f̃^{m+p}(A) = f̃^m(A)`, searched up to `horizon`.
pub fn detect_exact_period(f: &PLMap, a: &Continuum, horizon: usize) -> Option<(usize, usize)> {
    Trajectory::compute(f, a, horizon, DEFAULT_INTERVAL_CAP)
        .ok()
        .and_then(|t| t.cycle)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticPeriod {
    pub period: usize,
    /// Approximate limit cycle; `limit[i]` tracks iterates `n` with
    /// `(n − origin) mod period = i`.
    pub limit: Vec<Continuum>,
    pub origin: usize,
    /// Largest `dist_H(f̃^{n+p}(A), f̃^n(A))` over the test window.
    pub residual: Rational,
}

fn asymptotic_from(
    g: &crate::metric_graph::Graph,
    t: &Trajectory,
    tol: &Rational,
    period_cap: usize,
) -> Option<AsymptoticPeriod> {
    if let Some((m, p)) = t.cycle {
        return Some(AsymptoticPeriod {
            period: p,
            limit: t.orbit[m..m + p].to_vec(),
            origin: m,
            residual: rational::zero(),
        });
    }
    let last = t.orbit.len() - 1;
    let window_start = last - last / 4;
    'candidates: for p in 1..=period_cap {
        if last < window_start + p {
            break;
        }
        let mut residual = rational::zero();
        for n in window_start..=last - p {
            let d = t.orbit[n + p].hausdorff_distance(g, &t.orbit[n]);
            if &d >= tol {
                continue 'candidates;
            }
            if d > residual {
                residual = d;
            }
        }
        let origin = last + 1 - p;
        return Some(AsymptoticPeriod {
            period: p,
            limit: t.orbit[origin..=last].to_vec(),
            origin,
            residual,
        });
    }
    None
}

/// Smallest `p ≤ 64` with `dist_H(f̃^{n+p}(A), f̃^n(A)) < tol` across the
/// final quarter of the horizon; exact cycles report residual 0.
pub fn detect_asymptotic_periodicity(
    f: &PLMap,
    a: &Continuum,
    horizon: usize,
    tol: &Rational,
) -> Option<AsymptoticPeriod> {
    let t = Trajectory::compute(f, a, horizon, DEFAULT_INTERVAL_CAP).ok()?;
    asymptotic_from(f.graph(), &t, tol, DEFAULT_PERIOD_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    ExactlyPeriodic {
        period: usize,
        preperiod: usize,
    },
    AsymptoticallyPeriodic {
        period: usize,
        limit: Vec<Continuum>,
        residual: Rational,
    },
    /// Limit cycle of singletons. `limit` is exact after an exact cycle and
    /// a representative point of each near-degenerate limit otherwise.
    AsymptoticallyDegenerate {
        period: usize,
        limit: Vec<Point>,
        residual: Rational,
    },
    /// No two iterates up to `horizon` intersect.
    WanderingWitnessed {
        horizon: usize,
        final_diameter: Rational,
    },
    Inconclusive {
        horizon: usize,
        note: Option<String>,
    },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::ExactlyPeriodic { .. } => "ExactlyPeriodic",
            Verdict::AsymptoticallyPeriodic { .. } => "AsymptoticallyPeriodic",
            Verdict::AsymptoticallyDegenerate { .. } => "AsymptoticallyDegenerate",
            Verdict::WanderingWitnessed { .. } => "WanderingWitnessed",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }
}

/// Numbers backing a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    /// Iterates computed, counting `A` itself.
    pub steps: usize,
    pub exact_cycle: Option<(usize, usize)>,
    pub diameters: Vec<Rational>,
    /// Limit cycle with its phase origin, for every periodic-type verdict.
    pub limit_cycle: Vec<Continuum>,
    pub limit_origin: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub horizon: usize,
    pub tol: Rational,
    pub period_cap: usize,
    pub interval_cap: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            horizon: DEFAULT_HORIZON,
            tol: default_tol(),
            period_cap: DEFAULT_PERIOD_CAP,
            interval_cap: DEFAULT_INTERVAL_CAP,
        }
    }
}

/// A point of `a` used to name a near-degenerate limit.
fn representative(g: &crate::metric_graph::Graph, a: &Continuum) -> Point {
    a.as_point(g).unwrap_or_else(|| {
        let (e, iv) = a.parts().next().expect("nonempty");
        g.point(e, iv.lo().clone()).expect("in range")
    })
}

pub fn classify(f: &PLMap, a: &Continuum, horizon: usize, tol: &Rational) -> Result<Classification> {
    classify_with(
        f,
        a,
        &ClassifyOptions {
            horizon,
            tol: tol.clone(),
            ..ClassifyOptions::default()
        },
    )
}

pub fn classify_with(f: &PLMap, a: &Continuum, opts: &ClassifyOptions) -> Result<Classification> {
    if opts.horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    if opts.tol <= rational::zero() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let g = f.graph();
    let t = Trajectory::compute(f, a, opts.horizon, opts.interval_cap)?;
    let diameters: Vec<Rational> = t.orbit.iter().map(|c| c.diameter(g)).collect();
    let mut evidence = Evidence {
        steps: t.orbit.len(),
        exact_cycle: t.cycle,
        diameters,
        limit_cycle: Vec::new(),
        limit_origin: 0,
    };
    if let Some((m, p)) = t.cycle {
        let cycle = &t.orbit[m..m + p];
        evidence.limit_cycle = cycle.to_vec();
        evidence.limit_origin = m;
        let points: Option<Vec<Point>> = cycle.iter().map(|c| c.as_point(g)).collect();
        let verdict = match points {
            Some(limit) if !a.is_degenerate(g) => Verdict::AsymptoticallyDegenerate {
                period: p,
                limit,
                residual: rational::zero(),
            },
            _ => Verdict::ExactlyPeriodic {
                period: p,
                preperiod: m,
            },
        };
        return Ok(Classification { verdict, evidence });
    }
    if let Some(ap) = asymptotic_from(g, &t, &opts.tol, opts.period_cap) {
        evidence.limit_cycle = ap.limit.clone();
        evidence.limit_origin = ap.origin;
        let degenerate = ap.limit.iter().all(|c| c.diameter(g) < opts.tol);
        let verdict = if degenerate {
            Verdict::AsymptoticallyDegenerate {
                period: ap.period,
                limit: ap.limit.iter().map(|c| representative(g, c)).collect(),
                residual: ap.residual,
            }
        } else {
            Verdict::AsymptoticallyPeriodic {
                period: ap.period,
                limit: ap.limit,
                residual: ap.residual,
            }
        };
        return Ok(Classification { verdict, evidence });
    }
    let disjoint = (1..t.orbit.len()).all(|k| (0..k).all(|j| !t.orbit[j].intersects(&t.orbit[k])));
    let verdict = if disjoint {
        Verdict::WanderingWitnessed {
            horizon: opts.horizon,
            final_diameter: evidence.diameters.last().cloned().unwrap_or_else(rational::zero),
        }
    } else {
        Verdict::Inconclusive {
            horizon: opts.horizon,
            note: g.is_tree().then(|| {
                "unexpected for trees: a tree carries no simple closed curve, so no \
                 circumferential behaviour; raise the horizon or the period cap"
                    .to_string()
            }),
        }
    };
    Ok(Classification { verdict, evidence })
}

/// Heuristic outer picture of `ω_f(x)`: the iterates `f^n(x)` for
/// `burn_in ≤ n < burn_in + samples`, greedily clustered at resolution `tol`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaSample {
    pub points: Vec<Point>,
    /// Always true: the cloud is a sample, not the limit set.
    pub heuristic: bool,
    /// Set when the sampled orbit closed up exactly into a periodic cycle.
    pub exact_cycle: bool,
}

pub fn omega_limit_points(
    f: &PLMap,
    x: &Point,
    burn_in: usize,
    samples: usize,
    tol: &Rational,
) -> Result<OmegaSample> {
    if burn_in == 0 || samples == 0 {
        return Err(Error::InvalidArgument("burn-in and samples must be ≥ 1".into()));
    }
    let g = f.graph();
    let mut cur = x.clone();
    for _ in 0..burn_in {
        cur = f.evaluate(&cur);
    }
    let mut seen: HashMap<Point, usize> = HashMap::new();
    let mut orbit = Vec::new();
    let mut exact_cycle = false;
    for n in 0..samples {
        if seen.contains_key(&cur) {
            exact_cycle = true;
            break;
        }
        seen.insert(cur.clone(), n);
        orbit.push(cur.clone());
        cur = f.evaluate(&cur);
    }
    let mut points: Vec<Point> = Vec::new();
    for p in orbit {
        if !points.iter().any(|q| &g.distance(q, &p) <= tol) {
            points.push(p);
        }
    }
    if exact_cycle {
        points.sort();
    }
    Ok(OmegaSample {
        points,
        heuristic: true,
        exact_cycle,
    })
}

/// Whether `d` is zero, for readable assertions on residuals.
pub fn is_exact(residual: &Rational) -> bool {
    residual.is_zero()
}
