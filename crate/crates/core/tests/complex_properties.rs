use std::f64::consts::PI;

use num_complex::Complex64;
use potentia_core::complex::normalize_branch;
use potentia_core::quadrature::{circle_mean, CircleQuadrature};
use potentia_core::{principal_log, ComplexPoint};
use proptest::prelude::*;

proptest! {
    #[test]
    fn exp_inverts_principal_log(log_r in (1e-8f64).ln()..(1e8f64).ln(), theta in -PI..PI) {
        let z = Complex64::from_polar(log_r.exp(), theta);
        let w = principal_log(ComplexPoint::from_complex(z).unwrap()).unwrap();
        prop_assert!(w.im() > -PI && w.im() <= PI);
        prop_assert!((w.value().exp() - z).norm() <= 1e-14 * z.norm());
    }

    #[test]
    fn other_branches_normalize_to_the_principal_one(
        re in -3.0f64..3.0,
        im in -3.0f64..3.0,
        k in -20i64..20,
    ) {
        prop_assume!(re != 0.0 || im != 0.0);
        let w = principal_log(ComplexPoint::new(re, im).unwrap()).unwrap().value();
        let shifted = w + Complex64::new(0.0, 2.0 * PI * k as f64);
        prop_assert!((normalize_branch(shifted) - w).norm() < 1e-12);
    }

    #[test]
    fn circle_mean_is_rotation_invariant(
        coeffs in prop::collection::vec(-1.0f64..1.0, 10),
        offset in 0.0f64..(2.0 * PI),
    ) {
        let f = |t: f64| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * ((k / 2) as f64 * t + if k % 2 == 0 { 0.0 } else { 0.5 }).cos())
                .sum::<f64>()
        };
        let plain = circle_mean(f, &CircleQuadrature::new(64).unwrap());
        let rotated = circle_mean(f, &CircleQuadrature::with_offset(64, offset).unwrap());
        prop_assert!((plain - rotated).abs() < 1e-12);
    }
}

#[test]
fn circle_mean_examples() {
    let q = CircleQuadrature::new(64).unwrap();
    assert_eq!(circle_mean(|_| 2.5, &q), 2.5);
    for n in [16, 17, 100] {
        assert!(circle_mean(f64::cos, &CircleQuadrature::new(n).unwrap()).abs() < 1e-14);
    }
    let mean = circle_mean(|t| Complex64::from_polar(1.0, t).re.powi(2), &q);
    assert!((mean - 0.5).abs() < 1e-12);
}
