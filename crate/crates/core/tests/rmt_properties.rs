use cuelab_core::rmt::{
    char_poly_coefficients, char_poly_derivative, eigenvalue_average, mixed_moment_mc_with, sample_cue_with,
};
use cuelab_core::{Complex64, MixedMomentSpec, RngSeed, Sampler};
use proptest::prelude::*;

fn sampler() -> impl Strategy<Value = Sampler> {
    prop_oneof![Just(Sampler::Ginibre), Just(Sampler::Verblunsky)]
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rotation_leaves_eigenvalue_average_unchanged(
        n in 2usize..40,
        seed in any::<u64>(),
        delta in -10.0f64..10.0,
        orders in prop::collection::vec(1u32..4, 1..4),
        sampler in sampler(),
    ) {
        let s = sample_cue_with(n, RngSeed::new(seed, 0), sampler).unwrap();
        let a = eigenvalue_average(&s, &orders);
        let b = eigenvalue_average(&s.rotated(delta), &orders);
        prop_assert!(relative(a, b) < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn derivative_matches_central_difference(
        n in 1usize..=50,
        order in 1u32..=4,
        seed in any::<u64>(),
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let s = sample_cue_with(n, RngSeed::new(seed, 1), Sampler::Ginibre).unwrap();
        let c = char_poly_coefficients(&s);
        let h = 1e-3 / n as f64;
        let f = |t: f64| char_poly_derivative(&c, t, order - 1);
        let fd = (f(theta - 2.0 * h) - f(theta + 2.0 * h) + 8.0 * (f(theta + h) - f(theta - h))) / (12.0 * h);
        let exact = char_poly_derivative(&c, theta, order);
        prop_assert!(relative(exact, fd) < 1e-6, "n={n} order={order}: {exact} vs {fd}");
    }

    #[test]
    fn estimates_do_not_depend_on_worker_count(seed in any::<u64>(), sampler in sampler()) {
        let spec = MixedMomentSpec::new(6, vec![1, 2]).unwrap();
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mixed_moment_mc_with(&spec, 300, RngSeed::new(seed, 0), sampler).unwrap())
        };
        let (one, three) = (run(1), run(3));
        prop_assert_eq!(one.mean.re.to_bits(), three.mean.re.to_bits());
        prop_assert_eq!(one.mean.im.to_bits(), three.mean.im.to_bits());
        prop_assert_eq!(one.std_error.to_bits(), three.std_error.to_bits());
    }

    #[test]
    fn identical_seeds_give_identical_samples(n in 1usize..30, master in any::<u64>(), stream in any::<u64>(), sampler in sampler()) {
        let a = sample_cue_with(n, RngSeed::new(master, stream), sampler).unwrap();
        let b = sample_cue_with(n, RngSeed::new(master, stream), sampler).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn eigenangles_lie_in_half_open_period(n in 1usize..60, seed in any::<u64>(), sampler in sampler()) {
        let s = sample_cue_with(n, RngSeed::new(seed, 2), sampler).unwrap();
        prop_assert_eq!(s.eigenangles.len(), n);
        prop_assert!(s.eigenangles.iter().all(|&t| (0.0..std::f64::consts::TAU).contains(&t)));
    }
}
