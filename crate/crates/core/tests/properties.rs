//! Randomized checks of divergence inequalities and region projection.

use oneshot_core::entropic::{
    classical_np_oracle, fact_bound, hypothesis_testing_divergence, max_relative_entropy,
    smooth_max_relative_entropy, Smoothing, SmoothingStrategy,
};
use oneshot_core::operator::{partial_trace, tensor, DistanceConvention, RegisterLayout};
use oneshot_core::random::{random_commuting_pair, random_density, random_full_rank};
use oneshot_core::region::{fourier_motzkin, PenaltyMode, RatePolytope, Row};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(seed: u64, cases: u32) -> Config {
    eprintln!("proptest seed {seed:#x}, {cases} cases");
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

proptest! {
    #![proptest_config(config(0xd1ce_0001, 24))]
    #[test]
    fn commuting_pairs_match_classical_oracle(seed in any::<u64>(), dim in 2usize..5, eps in 0.01f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (rho, sigma, p, q) = random_commuting_pair(&mut rng, dim);
        let quantum = hypothesis_testing_divergence(&rho, &sigma, eps).unwrap();
        let oracle = classical_np_oracle(&p, &q, eps).unwrap().divergence;
        prop_assert!((quantum - oracle).abs() < 1e-6, "{quantum} vs {oracle}");
    }
}

proptest! {
    #![proptest_config(config(0xd1ce_0002, 24))]
    #[test]
    fn divergence_bounds_and_monotonicity(seed in any::<u64>(), eps in 0.02f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&mut rng, 3, 2);
        let sigma = random_full_rank(&mut rng, 3);
        let small = hypothesis_testing_divergence(&rho, &sigma, eps).unwrap();
        let large = hypothesis_testing_divergence(&rho, &sigma, eps + 0.3).unwrap();
        prop_assert!(small <= large + 1e-7);
        prop_assert!(small <= fact_bound(&rho, &sigma, eps).unwrap() + 1e-7);
        let dmax = max_relative_entropy(&rho, &sigma).unwrap();
        prop_assert!(small >= -1e-9);
        prop_assert!(small <= dmax - (1.0 - eps).log2() + 1e-7);
    }
}

proptest! {
    #![proptest_config(config(0xd1ce_0003, 16))]
    #[test]
    fn partial_trace_never_increases_divergence(seed in any::<u64>(), eps in 0.05f64..0.6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = RegisterLayout::new([("A", 2), ("B", 2)]).unwrap();
        let rho = random_density(&mut rng, 4, 3);
        let sigma = tensor(&random_full_rank(&mut rng, 2), &random_full_rank(&mut rng, 2));
        let whole = hypothesis_testing_divergence(&rho, &sigma, eps).unwrap();
        let rho_a = partial_trace(&rho, &layout, &["A"]).unwrap();
        let sigma_a = partial_trace(&sigma, &layout, &["A"]).unwrap();
        let part = hypothesis_testing_divergence(&rho_a, &sigma_a, eps).unwrap();
        prop_assert!(part <= whole + 1e-7, "{part} > {whole}");
    }
}

proptest! {
    #![proptest_config(config(0xd1ce_0004, 24))]
    #[test]
    fn smoothing_lowers_max_divergence(seed in any::<u64>(), eps in 0.0f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (rho, sigma, _, _) = random_commuting_pair(&mut rng, 4);
        let plain = max_relative_entropy(&rho, &sigma).unwrap();
        let smooth = smooth_max_relative_entropy(
            &rho,
            &sigma,
            eps,
            Smoothing::new(SmoothingStrategy::DiagonalScan, DistanceConvention::default()),
        )
        .unwrap();
        prop_assert!(smooth <= plain + 1e-9);
    }
}

proptest! {
    #![proptest_config(config(0xd1ce_0005, 32))]
    #[test]
    fn projection_contains_shadow_of_feasible_points(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars: Vec<String> = ["R1", "R2", "T1", "T2"].iter().map(|s| s.to_string()).collect();
        let rows: Vec<Row> = (0..6)
            .map(|i| {
                let a: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..2.0)).collect();
                Row::plain(format!("r{i}"), a, rng.random_range(0.5..3.0))
            })
            .collect();
        let poly = RatePolytope::new(vars, rows, PenaltyMode::Off).unwrap();
        let shadow = fourier_motzkin(&poly, &["T1", "T2"]).unwrap();
        for _ in 0..200 {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..3.0)).collect();
            if poly.contains(&x, 1e-12) {
                prop_assert!(shadow.contains(&x[..2], 1e-7), "{x:?} lost by projection");
            }
        }
    }
}
