use std::f64::consts::PI;

use num_complex::Complex64;
use potentia_core::domain::{largest_arc, StarDomainSpec};
use potentia_core::hardy::{catalog, hardy_dichotomy, integral_mean, koebe_map, wedge_map, HardyVerdict, RatioLadder};
use potentia_core::quadrature::{mean_value_residual, CircleQuadrature};
use potentia_core::{ComplexPoint, DiskPoint};
use proptest::prelude::*;

#[test]
fn integral_means_increase_with_radius() {
    let radii = [0.1, 0.5, 0.9, 0.99, 0.999, 0.9999];
    for map in catalog() {
        for p in [0.25, 0.5, 1.0, 2.0] {
            let means: Vec<f64> = radii
                .iter()
                .map(|&r| integral_mean(&map, p, r, 512).unwrap().integral_mean)
                .collect();
            for w in means.windows(2) {
                assert!(w[0] <= w[1] + 1e-10, "{} p = {p}: {means:?}", map.name);
            }
        }
    }
}

#[test]
fn catalog_maps_are_analytic() {
    let q = CircleQuadrature::new(256).unwrap();
    for map in catalog() {
        for (c, radius) in [(Complex64::new(0.0, 0.0), 0.5), (Complex64::new(0.3, -0.2), 0.3)] {
            for part in [0, 1] {
                let h = |z: Complex64| {
                    let w = map.evaluate(DiskPoint::from_complex(z)?)?;
                    Ok(if part == 0 { w.re } else { w.im })
                };
                let res = mean_value_residual(h, ComplexPoint::from_complex(c).unwrap(), radius, &q).unwrap();
                assert!(res < 1e-10, "{}: {res}", map.name);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rotation_leaves_means_unchanged(
        theta in -PI..PI,
        r in 0.1f64..0.999,
        p in prop::sample::select(vec![0.25, 0.5, 1.0, 2.0]),
        which in 0usize..5,
    ) {
        let map = catalog().swap_remove(which);
        let plain = integral_mean(&map, p, r, 512).unwrap().integral_mean;
        let rotated = integral_mean(&map.rotated(theta), p, r, 512).unwrap().integral_mean;
        prop_assert!((plain - rotated).abs() <= 1e-12 * plain, "{plain} vs {rotated}");
    }

    #[test]
    fn arcs_shrink_for_single_peaked_radial_functions(
        bump in 0.1f64..2.0,
        peak in -PI..PI,
        r1 in 0.5f64..4.0,
        step in 0.0f64..2.0,
    ) {
        let d = StarDomainSpec::new("bump", move |t: f64| 1.0 + bump * (0.5 + 0.5 * (t - peak).cos()), 0.0).unwrap();
        let grid = 3600;
        let tol = 2.0 * PI / grid as f64;
        let a1 = largest_arc(&d, r1, grid).unwrap();
        let a2 = largest_arc(&d, r1 + step, grid).unwrap();
        prop_assert!(a2 <= a1 + tol);
        prop_assert_eq!(largest_arc(&d, 0.99, grid).unwrap(), 2.0 * PI);
    }
}

#[test]
fn threshold_dichotomy_for_catalog_maps() {
    let ladder = RatioLadder::default();
    for map in catalog().into_iter().filter(|m| m.known_threshold.is_finite()) {
        let p_star = map.known_threshold;
        let below = hardy_dichotomy(&map, 0.8 * p_star, &ladder).unwrap();
        assert_eq!(below.verdict, HardyVerdict::Converging, "{}: {below:?}", map.name);
        assert!(below.ratios.iter().all(|&q| q <= 1.1));
        let above = hardy_dichotomy(&map, 1.2 * p_star, &ladder).unwrap();
        assert_eq!(above.verdict, HardyVerdict::Diverging, "{}: {above:?}", map.name);
    }
}

#[test]
fn verdicts_do_not_depend_on_the_base_point() {
    let ladder = RatioLadder::default();
    let maps = [koebe_map(), wedge_map(PI / 2.0).unwrap()];
    let bases = [
        Complex64::new(0.3, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(-0.4, -0.4),
    ];
    for map in maps {
        let p_star = map.known_threshold;
        for b in bases {
            let moved = map.recentered(DiskPoint::from_complex(b).unwrap());
            for (factor, expected) in [(0.8, HardyVerdict::Converging), (1.2, HardyVerdict::Diverging)] {
                let rep = hardy_dichotomy(&moved, factor * p_star, &ladder).unwrap();
                assert_eq!(rep.verdict, expected, "{} at {b}: {rep:?}", map.name);
            }
        }
    }
}
