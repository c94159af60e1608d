use std::f64::consts::PI;

use potentia_core::brownian::{
    default_test_functions, greens_constant_fit, occupation_estimate, occupation_estimates, MCConfig, TestFunction,
};
use potentia_core::DiskPoint;

fn origin() -> DiskPoint {
    DiskPoint::new(0.0, 0.0).unwrap()
}

#[test]
fn estimates_are_identical_across_thread_counts() {
    let config = MCConfig::new(2000, 1e-3, 42, origin()).unwrap();
    let functions = [TestFunction::unit(), TestFunction::disk_indicator(0.5)];
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| occupation_estimates(&config, &functions).unwrap())
    };
    let one = run(1);
    let four = run(4);
    for (a, b) in one.iter().zip(&four) {
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }
}

#[test]
fn doubling_paths_shrinks_stderr_by_root_two() {
    let ratios: Vec<f64> = (0..5)
        .map(|seed| {
            let small = MCConfig::new(4000, 1e-3, seed, origin()).unwrap();
            let large = MCConfig::new(8000, 1e-3, seed + 100, origin()).unwrap();
            let s = occupation_estimate(&small, &TestFunction::unit()).unwrap().stderr;
            let l = occupation_estimate(&large, &TestFunction::unit()).unwrap().stderr;
            s / l
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((mean / 2f64.sqrt() - 1.0).abs() < 0.2, "{ratios:?}");
}

#[test]
fn finer_steps_reduce_the_exit_overshoot() {
    let coarse = MCConfig::new(20_000, 1e-3, 42, origin()).unwrap();
    let fine = MCConfig::new(20_000, 1e-4, 42, origin()).unwrap();
    let c = occupation_estimate(&coarse, &TestFunction::unit()).unwrap();
    let f = occupation_estimate(&fine, &TestFunction::unit()).unwrap();
    // Late exit detection biases the mean upward, by O(√dt).
    assert!(c.mean > 0.5 && f.mean < c.mean);
    assert!((f.mean - 0.5).abs() < (c.mean - 0.5).abs());
    let predicted_ratio = (1e-3f64 / 1e-4).sqrt();
    let observed_ratio = (c.mean - 0.5) / (f.mean - 0.5).max(1e-4);
    assert!(observed_ratio > 0.3 * predicted_ratio, "{} {}", c.mean, f.mean);
}

#[test]
fn kappa_is_invariant_under_scaling_the_test_functions() {
    let config = MCConfig::new(2000, 1e-3, 5, origin()).unwrap();
    let base = greens_constant_fit(&config, &default_test_functions()).unwrap();
    let scaled: Vec<TestFunction> = default_test_functions().iter().map(|f| f.scaled(10.0)).collect();
    let fit = greens_constant_fit(&config, &scaled).unwrap();
    assert!((fit.kappa / base.kappa - 1.0).abs() < 1e-12);
    assert!(!fit.ill_conditioned);
}

#[test]
fn kappa_does_not_depend_on_the_start() {
    let start = DiskPoint::new(0.3, 0.0).unwrap();
    let config = MCConfig::new(10_000, 1e-4, 42, start).unwrap();
    let fit = greens_constant_fit(&config, &default_test_functions()).unwrap();
    assert!((fit.kappa * PI - 1.0).abs() < 0.05, "κ = {}", fit.kappa);
}
