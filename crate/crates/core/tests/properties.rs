use num_complex::Complex64;
use proptest::prelude::*;
use qwsearch::*;

fn unitary(alpha: f64, beta: f64, gamma: f64, theta: f64) -> [Complex64; 4] {
    let g = Complex64::from_polar(1.0, alpha);
    [
        g * Complex64::from_polar(theta.cos(), beta),
        g * Complex64::from_polar(theta.sin(), gamma),
        -g * Complex64::from_polar(theta.sin(), -gamma),
        g * Complex64::from_polar(theta.cos(), -beta),
    ]
}

fn layer_strategy(n: usize) -> impl Strategy<Value = LocalLayer64> {
    prop::collection::vec((0.0..6.3f64, 0.0..6.3f64, 0.0..6.3f64, 0.0..1.6f64), n)
        .prop_map(|angles| LocalLayer::new(angles.into_iter().map(|(a, b, c, t)| unitary(a, b, c, t)).collect()).unwrap())
}

fn close(a: &NodeState64, b: &NodeState64, tol: f64) -> bool {
    a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| (x - y).norm() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evolution_preserves_norm(n in 2usize..=6, seed in any::<u64>(), tau in 0usize..40, t in any::<usize>(), optimized in any::<bool>()) {
        let state = NodeState64::random(n, seed).unwrap();
        let kind = if optimized { WalkKind::Optimized } else { WalkKind::Standard };
        let mut target = t % (1 << n);
        if optimized && target.count_ones() % 2 == 1 {
            target ^= 1;
        }
        let spec = WalkSpec64::new(n, target, kind).unwrap();
        let out = evolve(&WalkerState::compose(n, &state).unwrap(), &spec, &IterationPlan::explicit(tau)).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn layer_composition(seed in any::<u64>(), (a, b) in (2usize..=6).prop_flat_map(|n| (layer_strategy(n), layer_strategy(n)))) {
        let state = NodeState64::random(a.arity(), seed).unwrap();
        let sequential = state.apply_local_layer(&a).unwrap().apply_local_layer(&b).unwrap();
        let composed = state.apply_local_layer(&a.then(&b).unwrap()).unwrap();
        prop_assert!(close(&sequential, &composed, 1e-12));
        prop_assert!((sequential.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn overlap_is_conjugate_symmetric(n in 2usize..=7, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = NodeState64::random(n, s1).unwrap();
        let b = NodeState64::random(n, s2).unwrap();
        let ab = a.overlap(&b).unwrap();
        let ba = b.overlap(&a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-14);
        prop_assert!((a.overlap(&a).unwrap().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn translation_covariance(n in 2usize..=6, seed in any::<u64>(), tau in 0usize..30, t in any::<usize>(), s in any::<usize>(), optimized in any::<bool>()) {
        let kind = if optimized { WalkKind::Optimized } else { WalkKind::Standard };
        let nodes = 1usize << n;
        let (mut t, mut s) = (t % nodes, s % nodes);
        if optimized {
            if t.count_ones() % 2 == 1 { t ^= 1; }
            if s.count_ones() % 2 == 1 { s ^= 1; }
        }
        let psi = NodeState64::random(n, seed).unwrap();
        let plan = IterationPlan::explicit(tau);
        let direct = evolve(&WalkerState::compose(n, &psi).unwrap(), &WalkSpec64::new(n, t ^ s, kind).unwrap(), &plan).unwrap();
        let moved = evolve(&WalkerState::compose(n, &psi.translated(s).unwrap()).unwrap(), &WalkSpec64::new(n, t, kind).unwrap(), &plan).unwrap();
        for d in 0..n {
            for x in 0..nodes {
                prop_assert!((moved.amplitude(d, x) - direct.amplitude(d, x ^ s)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn eta_is_target_symmetric(n in 2usize..=6, tau in 0usize..30) {
        let eta = NodeState64::uniform(n).unwrap();
        let r = run_skw1(&eta, &IterationPlan::explicit(tau), &RunOptions::default()).unwrap();
        let p0 = r.per_target[0].1;
        prop_assert!(r.per_target.iter().all(|(_, p)| (p - p0).abs() <= 1e-12));
    }

    #[test]
    fn measures_stay_in_range(n in 2usize..=5, seed in any::<u64>()) {
        let s = NodeState64::random(n, seed).unwrap();
        let r = groverian_entanglement(&s, &ProductSearch::new(8, seed)).unwrap();
        let (e_g, c_f) = (r.e_g.unwrap(), r.c_f.unwrap());
        prop_assert!((0.0..=1.0).contains(&r.f_c));
        prop_assert!((0.0..=1.0).contains(&e_g));
        prop_assert!(e_g <= c_f + 1e-9);
    }
}
