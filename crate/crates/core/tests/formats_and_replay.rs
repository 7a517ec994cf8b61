use std::sync::Arc;

use hyperdyn_core::checkers::random::{map_for_seed, RandomMapConfig};
use hyperdyn_core::checkers::{check_nesting, check_period_bound, recheck, Counterexample, Status, TheoremId};
use hyperdyn_core::dynamics::classify;
use hyperdyn_core::formats::{continuum_to_text, graph_to_text, map_to_text, parse_continuum, parse_graph, parse_map};
use hyperdyn_core::hyperspace::sample;
use hyperdyn_core::rational::{self, ratio};
use hyperdyn_core::{catalog, Continuum, EdgeId, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_maps_round_trip(seed in 0u64..1_000_000) {
        let mm = map_for_seed(seed, &RandomMapConfig::default()).unwrap();
        let f = mm.map();
        let gtext = graph_to_text(f.graph());
        let g = Arc::new(parse_graph(&gtext).unwrap());
        prop_assert_eq!(graph_to_text(&g), gtext);
        let mtext = map_to_text(f, Some(&mm));
        let parsed = parse_map(&mtext, g.clone()).unwrap();
        prop_assert_eq!(map_to_text(&parsed.map, parsed.markov.as_ref()), mtext);
        let markov = parsed.markov.unwrap();
        prop_assert_eq!(markov.cells(), mm.cells());

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::continuum(&mut rng, &g, 12);
        let text = continuum_to_text(&a, &g);
        prop_assert_eq!(parse_continuum(&text, &g).unwrap(), a);
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = ratio(p, q);
        prop_assert_eq!(rational::parse(&rational::format(&r)).unwrap(), r);
    }

    #[test]
    fn classification_is_deterministic(seed in 0u64..1_000_000) {
        let mm = map_for_seed(seed, &RandomMapConfig::default()).unwrap();
        let f = mm.map();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::continuum(&mut rng, f.graph(), 12);
        let tol = rational::inverse_power_of_ten(6);
        prop_assert_eq!(classify(f, &a, 200, &tol).unwrap(), classify(f, &a, 200, &tol).unwrap());
    }
}

#[test]
fn parse_errors_carry_positions() {
    match parse_graph("edge a v0 v1\nedge b v1\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    let g = parse_graph("edge a v0 v1").unwrap();
    match parse_continuum("{ a:[1/2,2] }", &g) {
        Err(Error::Parse { line: 1, column, .. }) => assert!(column > 1),
        other => panic!("{other:?}"),
    }
    assert!(parse_continuum("{ zz:[0,1] }", &g).is_err());
}

#[test]
fn discontinuous_map_files_are_rejected() {
    let g = Arc::new(parse_graph("edge a v0 v1").unwrap());
    let text = "piece a 0 1/2 -> a[0..1]\npiece a 1/2 1 -> a[0..1]\n";
    assert!(parse_map(text, g).is_err());
}

fn star_counterexample(a: &Continuum, periods: Vec<usize>) -> Counterexample {
    let f = catalog::star_3_4_2_5();
    let g = f.graph();
    Counterexample {
        graph: graph_to_text(g),
        map: map_to_text(&f, None),
        continua: vec![continuum_to_text(a, g)],
        periods,
        horizon: Some(100),
        tol: None,
    }
}

#[test]
fn replay_reproduces_star_outcomes() {
    let f = catalog::star_3_4_2_5();
    let g = f.graph();
    let a = catalog::star_example_a(g);
    let direct = check_period_bound(&f, &a, 100);
    let replayed = recheck(TheoremId::PeriodBound, &star_counterexample(&a, vec![12])).unwrap();
    assert_eq!(direct.status, Status::Pass);
    assert_eq!(replayed.status, direct.status);
    assert_eq!(replayed.detail, direct.detail);
}

#[test]
fn replay_reproduces_a_failing_cycle() {
    let f = catalog::star_3_4_2_5();
    let g = f.graph();
    let arm = Continuum::segment(g, EdgeId(0), rational::zero(), rational::one()).unwrap();
    let cx = star_counterexample(&arm, vec![3]);
    let first = recheck(TheoremId::CycleOfGraphs, &cx).unwrap();
    assert_eq!(first.status, Status::Fail);
    let again = recheck(TheoremId::CycleOfGraphs, &cx).unwrap();
    assert_eq!(first, again);
}

#[test]
fn nesting_on_star_orbits() {
    let f = catalog::star_3_4_2_5();
    let g = f.graph();
    let a = catalog::star_example_a(g);
    let b = catalog::star_example_b(g);
    let out = check_nesting(&f, &b, &a, 100);
    assert!(!out.failed(), "{out:?}");
}
