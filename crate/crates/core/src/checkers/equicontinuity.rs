//! Sampling probe for equicontinuity of the induced map.
//!
//! For a center `B` and an `eps`, the probe looks for a `δ` such that every
//! sampled `C` with `dist_H(C, B) < δ` keeps `dist_H(f̃^n C, f̃^n B) < eps`
//! up to the horizon. `δ` starts at `eps` and is halved until the samples
//! agree. Centers are the closed `γ`-neighborhoods of a subtree `U`, one per
//! `γ`; finding a `δ` for one of them is evidence of an equicontinuity point
//! near `U`. Sampling cannot prove equicontinuity.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CheckOutcome, Status, TheoremId};
use crate::error::{Error, Result};
use crate::hyperspace::{sample, Continuum};
use crate::pl_map::PLMap;
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct ProbeOptions {
    pub gammas: Vec<Rational>,
    pub eps: Rational,
    pub horizon: usize,
    pub samples: usize,
    pub max_halvings: usize,
    /// Perturbation sizes are multiples of `δ / resolution`.
    pub resolution: i64,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            gammas: [8, 16, 32, 64].iter().map(|&d| rational::ratio(1, d)).collect(),
            eps: rational::ratio(1, 10),
            horizon: 500,
            samples: 200,
            max_halvings: 16,
            resolution: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterProbe {
    pub gamma: Rational,
    pub center: Continuum,
    /// Largest `δ` tried that all samples respected.
    pub delta: Option<Rational>,
    /// Samples accepted at the final `δ`.
    pub samples: usize,
    /// Largest `dist_H(f̃^n C, f̃^n B)` seen at the final `δ`.
    pub worst: Rational,
    /// A sample that broke `eps` at the smallest `δ`, when none was found.
    pub witness: Option<Continuum>,
}

#[derive(Debug, Clone)]
pub struct EquicontinuityReport {
    pub eps: Rational,
    pub horizon: usize,
    pub probes: Vec<CenterProbe>,
    pub outcome: CheckOutcome,
}

/// Largest distance along the joint orbit, stopping early once the pair
/// state repeats or the orbits merge.
fn worst_distance(f: &PLMap, b: &Continuum, c: &Continuum, horizon: usize, eps: &Rational) -> Rational {
    let g = f.graph();
    let mut bn = b.clone();
    let mut cn = c.clone();
    let mut worst = rational::zero();
    let mut seen: HashSet<(Continuum, Continuum)> = HashSet::new();
    for _ in 0..=horizon {
        if bn == cn {
            break;
        }
        let d = cn.hausdorff_distance(g, &bn);
        if d > worst {
            worst = d;
            if &worst >= eps {
                break;
            }
        }
        if !seen.insert((bn.clone(), cn.clone())) {
            break;
        }
        bn = f.image_continuum(&bn);
        cn = f.image_continuum(&cn);
    }
    worst
}

fn probe_center(f: &PLMap, gamma: &Rational, center: Continuum, opts: &ProbeOptions) -> CenterProbe {
    let g = f.graph();
    let mut delta = opts.eps.clone();
    let mut witness = None;
    for halving in 0..=opts.max_halvings {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(halving as u64));
        let mut accepted = 0usize;
        let mut attempts = 0usize;
        let mut worst = rational::zero();
        let mut broken = None;
        while accepted < opts.samples && attempts < opts.samples * 20 {
            attempts += 1;
            let c = sample::perturb(&mut rng, g, &center, &delta, opts.resolution);
            if c.hausdorff_distance(g, &center) >= delta {
                continue;
            }
            accepted += 1;
            let d = worst_distance(f, &center, &c, opts.horizon, &opts.eps);
            if d >= opts.eps {
                broken = Some(c);
                break;
            }
            if d > worst {
                worst = d;
            }
        }
        match broken {
            None if accepted >= opts.samples => {
                return CenterProbe {
                    gamma: gamma.clone(),
                    center,
                    delta: Some(delta),
                    samples: accepted,
                    worst,
                    witness: None,
                }
            }
            None => {}
            Some(c) => witness = Some(c),
        }
        delta /= rational::int(2);
    }
    CenterProbe {
        gamma: gamma.clone(),
        center,
        delta: None,
        samples: 0,
        worst: rational::zero(),
        witness,
    }
}

/// Probes the `γ`-neighborhoods of `u`.
pub fn probe_equicontinuity(f: &PLMap, u: &Continuum, opts: &ProbeOptions) -> Result<EquicontinuityReport> {
    if opts.eps <= rational::zero() || opts.samples == 0 || opts.resolution <= 0 {
        return Err(Error::InvalidArgument("eps, samples and resolution must be positive".into()));
    }
    let g = f.graph();
    let id = TheoremId::Equicontinuity;
    let unmet = |why: &str| EquicontinuityReport {
        eps: opts.eps.clone(),
        horizon: opts.horizon,
        probes: Vec::new(),
        outcome: CheckOutcome::unmet(id, why),
    };
    if !g.is_tree() {
        return Ok(unmet("graph is not a tree"));
    }
    if u.is_degenerate(g) {
        return Ok(unmet("subtree is degenerate"));
    }
    if g.classification().endpoints.iter().any(|&v| u.contains_vertex(g, v)) {
        return Ok(unmet("subtree contains an endpoint"));
    }
    let probes: Vec<CenterProbe> = opts
        .gammas
        .iter()
        .map(|gamma| {
            let center = u.neighborhood(g, gamma)?;
            Ok(probe_center(f, gamma, center, opts))
        })
        .collect::<Result<_>>()?;
    let found = probes.iter().filter(|p| p.delta.is_some()).count();
    let mut outcome = if found > 0 {
        CheckOutcome::new(
            id,
            Status::Pass,
            format!("{found} of {} centers admit a delta for eps {}", probes.len(), rational::format(&opts.eps)),
        )
    } else {
        CheckOutcome::new(
            id,
            Status::Fail,
            format!("no center admits a delta down to eps/2^{}", opts.max_halvings),
        )
    };
    outcome.instances = probes.iter().map(|p| p.samples).sum();
    outcome.seed = Some(opts.seed);
    Ok(EquicontinuityReport {
        eps: opts.eps.clone(),
        horizon: opts.horizon,
        probes,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::metric_graph::EdgeId;
    use crate::rational::ratio;

    #[test]
    fn tent_centers_admit_a_delta() {
        let f = catalog::tent();
        let u = Continuum::segment(f.graph(), EdgeId(0), ratio(2, 5), ratio(3, 5)).unwrap();
        let opts = ProbeOptions {
            samples: 40,
            horizon: 100,
            gammas: vec![ratio(1, 8)],
            ..ProbeOptions::default()
        };
        let r = probe_equicontinuity(&f, &u, &opts).unwrap();
        assert!(r.outcome.passed(), "{:?}", r.outcome);
        let p = &r.probes[0];
        assert!(p.delta.is_some());
        assert!(p.worst < opts.eps);
    }

    #[test]
    fn endpoints_are_excluded() {
        let f = catalog::tent();
        let u = Continuum::whole(f.graph());
        let r = probe_equicontinuity(&f, &u, &ProbeOptions::default()).unwrap();
        assert!(matches!(r.outcome.status, Status::PreconditionUnmet(_)));
    }
}
