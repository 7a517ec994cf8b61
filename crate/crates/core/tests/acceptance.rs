//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Tolerances are pinned here rather than taken from library defaults.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use hyperdyn_core::catalog;
use hyperdyn_core::checkers::center::{check_center_structure, CenterOptions};
use hyperdyn_core::checkers::equicontinuity::{probe_equicontinuity, ProbeOptions};
use hyperdyn_core::checkers::random::RandomMapConfig;
use hyperdyn_core::checkers::suites::{run_corpus, trichotomy_suite};
use hyperdyn_core::checkers::{check_period_bound, EnumerateOptions};
use hyperdyn_core::dynamics::{detect_exact_period, ClassifyOptions};
use hyperdyn_core::hyperspace::sample;
use hyperdyn_core::metric_graph::families;
use hyperdyn_core::pl_map::collapse::{tent_value, truncated_tent_value, Collapse};
use hyperdyn_core::pl_map::markov::MarkovMap;
use hyperdyn_core::rational::{self, int, ratio};
use hyperdyn_core::{Continuum, EdgeId, Graph, Rational};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 20_000;
const CORPUS_SIZE: usize = 1000;
const TRICHOTOMY_SEED: u64 = 40_000;
const TRICHOTOMY_PAIRS: usize = 500;
const TRICHOTOMY_HORIZON: usize = 2000;
/// `1/10^6`.
fn trichotomy_tol() -> Rational {
    rational::inverse_power_of_ten(6)
}
const HAUSDORFF_GRID: i64 = 512;
/// Oracle agreement within `2/512`.
const HAUSDORFF_SLACK: f64 = 2.0 / 512.0;
const HAUSDORFF_PAIRS: usize = 200;
const METRIC_TRIPLES: usize = 200;
const COLLAPSE_DEPTH: u32 = 8;
const COLLAPSE_POINTS: usize = 100;
const EQUI_HORIZON: usize = 500;
const EQUI_SAMPLES: usize = 200;
const CORE_HORIZON: usize = 5000;

type Verdict = Result<String, String>;

fn star_periods() -> Verdict {
    let f = catalog::star_3_4_2_5();
    let g = f.graph();
    let a = catalog::star_example_a(g);
    let b = catalog::star_example_b(g);
    let pa = detect_exact_period(&f, &a, 100);
    let pb = detect_exact_period(&f, &b, 100);
    if pa != Some((0, 12)) || pb != Some((0, 30)) {
        return Err(format!("periods {pa:?} and {pb:?}"));
    }
    let bound = common::lcm_naive(g.endpoint_count() as u64);
    if bound != 360_360 || g.lcm_end_bound().unwrap() != 360_360u64.into() {
        return Err(format!("lcm bound {bound}"));
    }
    for c in [&a, &b] {
        let out = check_period_bound(&f, c, 100);
        if !out.passed() {
            return Err(out.detail);
        }
    }
    Ok("periods 12 and 30 divide lcm{1..14} = 360360".into())
}

fn corpus() -> (Verdict, Verdict) {
    let cfg = RandomMapConfig::default();
    match run_corpus(CORPUS_SEED, CORPUS_SIZE, &cfg, &EnumerateOptions::default()) {
        Err(e) => (Err(e.to_string()), Err(e.to_string())),
        Ok(r) => {
            let pb = if r.period_bound.passed() {
                Ok(r.period_bound.detail.clone())
            } else {
                Err(format!("seed {:?}: {}", r.period_bound.seed, r.period_bound.detail))
            };
            let nest = if r.nesting.failed() {
                Err(format!("seed {:?}: {}", r.nesting.seed, r.nesting.detail))
            } else {
                Ok(format!("{} maps, {} nonvacuous pairs, no failures", r.maps, r.nesting.instances))
            };
            (pb, nest)
        }
    }
}

fn trichotomy() -> Verdict {
    let opts = ClassifyOptions {
        horizon: TRICHOTOMY_HORIZON,
        tol: trichotomy_tol(),
        ..ClassifyOptions::default()
    };
    let r = trichotomy_suite(TRICHOTOMY_SEED, TRICHOTOMY_PAIRS, &RandomMapConfig::default(), &opts, 12)
        .map_err(|e| e.to_string())?;
    let counts = format!("{:?}", r.counts);
    if r.passed() {
        Ok(format!("{} pairs, {counts}", r.pairs))
    } else {
        Err(format!(
            "inconclusive {:?}, non-shrinking wanderers {:?}",
            r.inconclusive, r.non_shrinking_wanderers
        ))
    }
}

fn hausdorff() -> Verdict {
    let named: Vec<(&str, Graph)> = vec![
        ("arc", families::arc()),
        ("path-4", families::path(4)),
        ("star-3", families::star(3)),
        ("star-5", families::star(5)),
        ("circle", families::circle()),
        ("figure-eight", families::figure_eight()),
        ("lollipop", families::lollipop()),
    ];
    let mut worst = 0.0f64;
    for (name, g) in &named {
        let oracle = common::GridOracle::new(g, HAUSDORFF_GRID);
        let mut rng = ChaCha8Rng::seed_from_u64(name.len() as u64 * 7919);
        for _ in 0..HAUSDORFF_PAIRS {
            let a = sample::continuum(&mut rng, g, 37);
            let b = sample::continuum(&mut rng, g, 29);
            let exact = rational::to_f64(&a.hausdorff_distance(g, &b));
            let approx = oracle.hausdorff(&a, &b);
            let err = (exact - approx).abs();
            worst = worst.max(err);
            if err > HAUSDORFF_SLACK {
                return Err(format!("{name}: {} vs {} differ by {err}", a.display(g), b.display(g)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..METRIC_TRIPLES {
        let (name, g) = &named[i % named.len()];
        let [a, b, c] = [0, 1, 2].map(|_| sample::continuum(&mut rng, g, 24));
        let ab = a.hausdorff_distance(g, &b);
        let ba = b.hausdorff_distance(g, &a);
        let bc = b.hausdorff_distance(g, &c);
        let ac = a.hausdorff_distance(g, &c);
        let aa = a.hausdorff_distance(g, &a);
        let zero = rational::zero();
        if aa != zero || ab != ba || ac > &ab + &bc || ((ab == zero) != (a == b)) {
            return Err(format!("{name}: metric axiom fails on {}, {}, {}", a.display(g), b.display(g), c.display(g)));
        }
    }
    Ok(format!(
        "{} families x {HAUSDORFF_PAIRS} pairs, worst oracle gap {worst:.5} <= 2/512; {METRIC_TRIPLES} metric triples",
        named.len()
    ))
}

/// `φ_D(x)` from the itinerary of `x` under `f`, rebuilt with tent branches.
fn itinerary_oracle(slope: &Rational, x: &Rational, depth: u32) -> Option<Rational> {
    let a = slope.recip();
    let mut word = Vec::new();
    let mut y = x.clone();
    for _ in 0..depth {
        word.push(y <= a);
        y = truncated_tent_value(slope, &y);
    }
    if y != int(0) && y != int(1) {
        return None;
    }
    for left in word.into_iter().rev() {
        y = if left { &y / int(2) } else { int(1) - &y / int(2) };
    }
    Some(y)
}

fn semi_conjugacy() -> Verdict {
    let mut checked = 0;
    for slope in [int(3), ratio(7, 2)] {
        let phi = Collapse::truncated_tent(slope.clone(), COLLAPSE_DEPTH).map_err(|e| e.to_string())?;
        let ends = phi.cylinder_endpoints();
        let stride = ends.len() / COLLAPSE_POINTS;
        for x in ends.iter().step_by(stride).take(COLLAPSE_POINTS) {
            let lhs = phi.apply(&truncated_tent_value(&slope, x));
            let rhs = tent_value(&phi.apply(x));
            if lhs != rhs {
                return Err(format!("slope {}: x = {}", rational::format(&slope), rational::format(x)));
            }
            match itinerary_oracle(&slope, x, COLLAPSE_DEPTH) {
                Some(y) if y == phi.apply(x) => {}
                other => return Err(format!("itinerary oracle {other:?} at {}", rational::format(x))),
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} cylinder endpoints, depth {COLLAPSE_DEPTH}, slopes 3 and 7/2, exact"))
}

fn equicontinuity() -> Verdict {
    let f = catalog::tent();
    let u = Continuum::segment(f.graph(), EdgeId(0), ratio(2, 5), ratio(3, 5)).map_err(|e| e.to_string())?;
    let opts = ProbeOptions {
        eps: ratio(1, 10),
        horizon: EQUI_HORIZON,
        samples: EQUI_SAMPLES,
        seed: 7,
        ..ProbeOptions::default()
    };
    let r = probe_equicontinuity(&f, &u, &opts).map_err(|e| e.to_string())?;
    let good: Vec<_> = r.probes.iter().filter(|p| p.delta.is_some() && p.samples >= EQUI_SAMPLES).collect();
    if !r.outcome.passed() || good.is_empty() {
        return Err(r.outcome.detail);
    }
    let deltas: Vec<String> = good
        .iter()
        .map(|p| format!("γ={} δ={}", rational::format(&p.gamma), rational::format(p.delta.as_ref().unwrap())))
        .collect();
    Ok(format!("eps 1/10, horizon {EQUI_HORIZON}, {EQUI_SAMPLES} perturbations each: {}", deltas.join(", ")))
}

fn period_doubling() -> Verdict {
    let mm = MarkovMap::close(catalog::period_doubling(3).map_err(|e| e.to_string())?, 64).map_err(|e| e.to_string())?;
    let g = mm.map().graph();
    let opts = CenterOptions {
        horizon: CORE_HORIZON,
        diameter_tol: rational::inverse_power_of_ten(3),
        ..CenterOptions::default()
    };
    let r = check_center_structure(&mm, &opts).map_err(|e| e.to_string())?;
    if !r.generating.passed() {
        return Err(r.generating.detail);
    }
    if !r.structure.passed() {
        return Err(r.structure.detail);
    }
    let chain = r
        .chains
        .iter()
        .find(|c| c.periods() == [1, 2, 4, 8])
        .ok_or_else(|| "no chain with periods 1, 2, 4, 8".to_string())?;
    let inner = &chain.innermost().base;
    let core = r
        .cores
        .iter()
        .find(|c| inner.contains(c))
        .ok_or_else(|| "no core inside the period-8 member".to_string())?;
    let diam = core_min_diameter(&mm, core);
    Ok(format!(
        "chain {} with periods 1,2,4,8; core {} reaches diameter {diam} within {CORE_HORIZON}",
        chain.cycles.iter().map(|c| c.base.display(g)).collect::<Vec<_>>().join(" ⊃ "),
        core.display(g)
    ))
}

fn core_min_diameter(mm: &MarkovMap, core: &Continuum) -> f64 {
    let f = mm.map();
    let mut c = core.clone();
    let mut best = c.diameter(f.graph());
    for _ in 0..CORE_HORIZON {
        c = f.image_continuum(&c);
        best = best.min(c.diameter(f.graph()));
        if best == rational::zero() {
            break;
        }
    }
    best.to_f64().unwrap_or(f64::NAN)
}

/// Runs a criterion and records its wall time.
fn timed<T>(run: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let out = run();
    (out, t.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let started = Instant::now();
    // Nesting shares the corpus pass with the period bound, so both carry
    // its time against the combined budget.
    let ((bound, nesting), corpus_secs) = timed(corpus);
    let results: Vec<(&str, Verdict, f64, f64)> = {
        let (star, t1) = timed(star_periods);
        let (tri, t4) = timed(trichotomy);
        let (haus, t5) = timed(hausdorff);
        let (semi, t6) = timed(semi_conjugacy);
        let (equi, t7) = timed(equicontinuity);
        let (pd, t8) = timed(period_doubling);
        vec![
            ("star-example-periods", star, t1, 1.0),
            ("period-bound-corpus", bound, corpus_secs, 600.0),
            ("nesting-corpus", nesting, corpus_secs, 600.0),
            ("trichotomy", tri, t4, 600.0),
            ("hausdorff-oracle", haus, t5, 60.0),
            ("collapse-semiconjugacy", semi, t6, 1.0),
            ("tent-equicontinuity", equi, t7, 120.0),
            ("period-doubling-center", pd, t8, 60.0),
        ]
    };
    let mut failures = 0;
    for (i, (name, v, secs, budget)) in results.iter().enumerate() {
        let timing = format!("{secs:.2}s of {budget:.0}s budget");
        match v {
            Ok(detail) if secs <= budget => println!("acceptance {} {name}: PASS ({detail}; {timing})", i + 1),
            Ok(detail) => {
                failures += 1;
                println!("acceptance {} {name}: FAIL (over budget: {timing}; {detail})", i + 1)
            }
            Err(detail) => {
                failures += 1;
                println!("acceptance {} {name}: FAIL ({detail}; {timing})", i + 1)
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed in {:.1}s",
        results.len() - failures,
        started.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
