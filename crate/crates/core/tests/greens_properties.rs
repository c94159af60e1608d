use std::f64::consts::PI;

use num_complex::Complex64;
use potentia_core::greens::{greens_disk_closed, greens_disk_series, greens_series_in_log_coordinates};
use potentia_core::quadrature::{mean_value_residual, CircleQuadrature};
use potentia_core::{ComplexPoint, DiskPoint, PuncturedDiskPoint};
use proptest::prelude::*;

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0f64..0.95, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn punctured_point() -> impl Strategy<Value = Complex64> {
    (0.05f64..0.95, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn closed(a: Complex64, z: Complex64) -> f64 {
    greens_disk_closed(DiskPoint::from_complex(a).unwrap(), DiskPoint::from_complex(z).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_is_symmetric_and_positive(a in disk_point(), z in disk_point()) {
        prop_assume!((a - z).norm() > 1e-6);
        let g = closed(a, z);
        prop_assert!(g > 0.0);
        prop_assert!((g - closed(z, a)).abs() <= 1e-13 * g.max(1.0));
    }

    #[test]
    fn closed_form_is_harmonic_away_from_the_pole(
        a in disk_point(),
        c in (0.0f64..0.8, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t)),
        radius in 0.01f64..0.1,
    ) {
        prop_assume!((c - a).norm() >= radius + 0.05);
        prop_assume!(c.norm() + radius <= 0.95);
        let q = CircleQuadrature::new(256).unwrap();
        let h = |z: Complex64| Ok(closed(a, z));
        let res = mean_value_residual(h, ComplexPoint::from_complex(c).unwrap(), radius, &q).unwrap();
        prop_assert!(res <= 1e-8, "residual {res}");
    }

    #[test]
    fn series_agrees_with_closed_form_within_its_bound(
        a in punctured_point(),
        z in punctured_point(),
        n in prop::sample::select(vec![50usize, 200, 1000]),
    ) {
        prop_assume!((a - z).norm() > 1e-3);
        let res = greens_disk_series(
            PuncturedDiskPoint::from_complex(a).unwrap(),
            PuncturedDiskPoint::from_complex(z).unwrap(),
            n,
        );
        // Small N may be refused when |log z ± log a| is large; that is allowed.
        if let Ok(res) = res {
            prop_assert!((res.value - closed(a, z)).abs() <= res.tail_bound);
        }
    }

    #[test]
    fn branch_choice_does_not_change_the_limit(
        a in punctured_point(),
        z in punctured_point(),
        ka in -3i64..=3,
        kz in -3i64..=3,
    ) {
        prop_assume!((a - z).norm() > 1e-3);
        let log = |w: Complex64| Complex64::new(w.norm().ln(), w.arg());
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        let n = 2000;
        let base = greens_series_in_log_coordinates(log(a), log(z), n).unwrap();
        let shifted = greens_series_in_log_coordinates(
            log(a) + two_pi_i * ka as f64,
            log(z) + two_pi_i * kz as f64,
            n,
        ).unwrap();
        prop_assert!((base.value - shifted.value).abs() <= base.tail_bound + shifted.tail_bound);
    }
}

#[test]
fn tail_bound_decays_until_the_rounding_floor() {
    let a = PuncturedDiskPoint::new(0.3, 0.1).unwrap();
    let z = PuncturedDiskPoint::new(-0.5, 0.4).unwrap();
    let bounds: Vec<f64> = [2, 4, 8, 16]
        .iter()
        .map(|&n| greens_disk_series(a, z, n).unwrap().tail_bound)
        .collect();
    for pair in bounds.windows(2) {
        assert!(pair[1] <= pair[0] / 2.0, "{bounds:?}");
    }
    for n in [100, 10_000, 100_000] {
        assert!(greens_disk_series(a, z, n).unwrap().tail_bound < 1e-12);
    }
}

#[test]
fn plain_partial_sum_error_is_order_one_over_n() {
    let a = PuncturedDiskPoint::new(0.3, 0.1).unwrap();
    let z = PuncturedDiskPoint::new(-0.5, 0.4).unwrap();
    let exact = closed(a.value(), z.value());
    let scaled: Vec<f64> = [1000, 10_000]
        .iter()
        .map(|&n| (greens_disk_series(a, z, n).unwrap().partial_sum - exact).abs() * n as f64)
        .collect();
    assert!((scaled[1] / scaled[0] - 1.0).abs() < 0.01, "{scaled:?}");
}

#[test]
fn logarithmic_singularity_is_removed_by_adding_log_distance() {
    let a = Complex64::new(0.2, -0.4);
    let mut oscillations = Vec::new();
    for eps in [1e-4, 1e-5, 1e-6, 1e-7, 1e-8] {
        let values: Vec<f64> = (0..32)
            .map(|k| {
                let z = a + Complex64::from_polar(eps, 2.0 * PI * k as f64 / 32.0);
                closed(a, z) + (a - z).norm().ln()
            })
            .collect();
        let (lo, hi) = values
            .iter()
            .fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
        oscillations.push(hi - lo);
        // The continuous extension takes the value ln(1 − |a|²) at a.
        assert!((values[0] - (1.0 - a.norm_sqr()).ln()).abs() <= 2.0 * eps + 1e-12);
    }
    assert!(oscillations[3] <= 1e-6 && oscillations[4] <= 1e-6, "{oscillations:?}");
    assert!(oscillations.windows(2).all(|w| w[1] < w[0]), "{oscillations:?}");
}
