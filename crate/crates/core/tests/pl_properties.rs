use std::f64::consts::PI;

use num_complex::Complex64;
use potentia_core::pl::{
    boundary_sup, catalog, growth_fit, pl_verdict, sharpness_check, subharmonic_residual, GrowthFit, PlConclusion,
    PlDomain, VerdictConfig,
};
use potentia_core::quadrature::CircleQuadrature;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Distance from `z` to the boundary of the wedge `|arg| < α/2`.
fn wedge_distance(z: Complex64, alpha: f64) -> f64 {
    let phi = z.arg();
    [alpha / 2.0, -alpha / 2.0]
        .iter()
        .map(|edge| {
            let gap = (phi - edge).abs();
            if gap < PI / 2.0 {
                z.norm() * gap.sin()
            } else {
                z.norm()
            }
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn sub_mean_value_inequality_on_random_circles() {
    let q = CircleQuadrature::new(256).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in catalog() {
        let PlDomain::Wedge { alpha } = f.domain else {
            unreachable!("catalog uses wedges")
        };
        for _ in 0..100 {
            let angle = rng.random_range(-0.45..0.45) * alpha;
            let center = Complex64::from_polar(rng.random_range(0.2..3.0), angle);
            let radius = rng.random_range(0.05..0.9) * wedge_distance(center, alpha).min(1.0);
            let res = subharmonic_residual(&f, center, radius, &q).unwrap();
            assert!(res <= 1e-8, "{} at {center}, radius {radius}: {res}", f.name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdict_is_monotone_in_k(
        which in 0usize..7,
        k1 in 0.5f64..10.0,
        extra in 0.0f64..100.0,
        p_fit in 0.0f64..3.0,
    ) {
        let f = catalog().swap_remove(which);
        let p_star = f.domain.p_star().unwrap();
        let fit = GrowthFit { c: 1.0, p: p_fit, residual: 0.0, bounded: p_fit == 0.0 };
        let config = VerdictConfig::default();
        let low = pl_verdict(&f, k1, &fit, p_star, 0.0, &config).unwrap();
        let high = pl_verdict(&f, k1 + extra, &fit, p_star, 0.0, &config).unwrap();
        if low.conclusion == PlConclusion::BoundedByK {
            prop_assert_eq!(high.conclusion, PlConclusion::BoundedByK);
        }
        if high.conclusion == PlConclusion::BoundedByK {
            prop_assert!(p_fit < p_star);
        }
    }
}

#[test]
fn sharpness_of_the_wedge_thresholds() {
    for alpha in [PI / 2.0, PI, 1.5 * PI] {
        let rep = sharpness_check(alpha, 4000, 20.0).unwrap();
        assert!(
            (rep.boundary_sup - 1.0).abs() <= 1e-9,
            "α = {alpha}: {}",
            rep.boundary_sup
        );
        assert!((rep.fit.p * alpha / PI - 1.0).abs() < 0.05);
        let beyond = rep.axis_radius * 1.5;
        let f = potentia_core::pl::sharpness_function(alpha).unwrap();
        assert!(f.log_modulus(Complex64::new(beyond, 0.0)).unwrap() > 1e6f64.ln());
    }
}

#[test]
fn boundary_sup_of_growing_function_grows_with_the_cap() {
    let f = &catalog()[3];
    assert_eq!(f.name, "exp(z)");
    let caps = [5.0, 10.0, 20.0];
    let sups: Vec<f64> = caps.iter().map(|&c| boundary_sup(f, 500, c).unwrap()).collect();
    assert!(sups.windows(2).all(|w| w[1] > 2.0 * w[0]));
    let fit = growth_fit(f, 0.0, &[2.0, 4.0, 8.0, 16.0, 32.0, 64.0]).unwrap();
    assert!((fit.p - 1.0).abs() < 1e-9);
}
