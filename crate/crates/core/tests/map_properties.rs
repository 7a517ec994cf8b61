use hyperdyn_core::catalog;
use hyperdyn_core::checkers::random::{map_for_seed, RandomMapConfig};
use hyperdyn_core::hyperspace::{induced_step, sample};
use hyperdyn_core::pl_map::DEFAULT_PIECE_CAP;
use hyperdyn_core::Continuum;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn image_contains_images_of_points(seed in 0u64..1_000_000) {
        let mm = map_for_seed(seed, &RandomMapConfig::default()).unwrap();
        let f = mm.map();
        let g = f.graph();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::continuum(&mut rng, g, 12);
        let fa = f.image_continuum(&a);
        for _ in 0..20 {
            let p = sample::point(&mut rng, g, 48);
            if a.contains_point(&p) {
                prop_assert!(fa.contains_point(&f.evaluate(&p)));
            }
        }
        for p in a.boundary_points(g) {
            prop_assert!(fa.contains_point(&f.evaluate(&p)));
        }
    }

    #[test]
    fn image_is_monotone_and_additive(seed in 0u64..1_000_000) {
        let mm = map_for_seed(seed, &RandomMapConfig::default()).unwrap();
        let f = mm.map();
        let g = f.graph();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::continuum(&mut rng, g, 12);
        let b = sample::sub_continuum(&mut rng, g, &a, 12);
        let fa = f.image_continuum(&a);
        prop_assert!(fa.contains(&f.image_continuum(&b)));
        let c = sample::continuum(&mut rng, g, 12);
        if a.intersects(&c) {
            let u = a.union(g, &c).unwrap();
            let expected = fa.union(g, &f.image_continuum(&c)).unwrap();
            prop_assert_eq!(f.image_continuum(&u), expected);
        }
    }

    #[test]
    fn image_diameter_is_lipschitz(seed in 0u64..1_000_000) {
        let mm = map_for_seed(seed, &RandomMapConfig::default()).unwrap();
        let f = mm.map();
        let g = f.graph();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::point(&mut rng, g, 48);
        let y = sample::point(&mut rng, g, 48);
        // A Markov map sending grid points to grid points has slope at most
        // the longest image path over the shortest cell.
        let dx = g.distance(&x, &y);
        let dfx = g.distance(&f.evaluate(&x), &f.evaluate(&y));
        let pieces: Vec<_> = g.edge_ids().flat_map(|e| f.pieces(e).iter().cloned()).collect();
        let lip = pieces
            .iter()
            .map(|p| p.path.length() / (&p.hi - &p.lo))
            .max()
            .unwrap();
        prop_assert!(dfx <= lip * dx);
    }

    #[test]
    fn powers_agree_with_iteration(seed in 0u64..1_000_000, n in 1usize..4) {
        let mm = map_for_seed(seed, &RandomMapConfig::default()).unwrap();
        let f = mm.map();
        let g = f.graph();
        let fnn = f.compose_power(n, DEFAULT_PIECE_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let p = sample::point(&mut rng, g, 60);
            let mut q = p.clone();
            for _ in 0..n {
                q = f.evaluate(&q);
            }
            prop_assert_eq!(fnn.evaluate(&p), q);
        }
        let a = sample::continuum(&mut rng, g, 12);
        let mut b = a.clone();
        for _ in 0..n {
            b = induced_step(f, &b);
        }
        prop_assert_eq!(fnn.image_continuum(&a), b);
    }

    #[test]
    fn fixed_point_set_is_fixed(seed in 0u64..1_000_000) {
        let mm = map_for_seed(seed, &RandomMapConfig::default()).unwrap();
        let f = mm.map();
        let fixed = f.fixed_points();
        for p in &fixed.points {
            prop_assert_eq!(&f.evaluate(p), p);
        }
        // Every tree self-map has a fixed point.
        prop_assert!(!fixed.is_empty());
    }
}

#[test]
fn whole_tent_is_invariant() {
    let f = catalog::tent();
    let g = f.graph();
    let whole = Continuum::whole(g);
    assert_eq!(f.image_continuum(&whole), whole);
}
