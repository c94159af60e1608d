use std::f64::consts::PI;

use num_complex::Complex64;
use potentia_core::greens::greens_disk_series;
use potentia_core::products::{
    cosh_product, mirror_closed_form, mirror_product, sin_cos_products, sinh_product, ProductParams, ProductResult,
};
use potentia_core::PuncturedDiskPoint;
use proptest::prelude::*;

fn check_improvement(name: &str, res: ProductResult, exact: f64) {
    let corrected = (res.value - exact).abs();
    let plain = (res.uncorrected() - exact).abs();
    assert!(
        corrected <= plain / 5.0,
        "{name}: corrected {corrected:e}, plain {plain:e}"
    );
}

#[test]
fn tail_correction_beats_plain_truncation() {
    let n = 1000;
    for r in [0.5, 1.0, 2.0] {
        check_improvement("sinh", sinh_product(r, n).unwrap(), r.sinh());
        check_improvement("cosh", cosh_product(r, n).unwrap(), r.cosh());
        let (s, c) = sin_cos_products(r, n).unwrap();
        check_improvement("sin", s, r.sin());
        check_improvement("cos", c, r.cos());
        let params = ProductParams::new(1.0, r, 0.5).unwrap();
        check_improvement("mirror", mirror_product(params, n).unwrap(), mirror_closed_form(params));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mirror_product_matches_the_disk_greens_function(
        b in -PI..PI,
        r in 0.05f64..3.0,
        c in 0.05f64..3.0,
    ) {
        prop_assume!((r - c).abs() > 1e-3 || b.abs() > 1e-3);
        let n = 2000;
        let params = ProductParams::new(b, r, c).unwrap();
        let product = mirror_product(params, n).unwrap();
        let a = PuncturedDiskPoint::new((-r).exp(), 0.0).unwrap();
        let z = PuncturedDiskPoint::from_complex(Complex64::new(-c, b).exp()).unwrap();
        let series = greens_disk_series(a, z, n).unwrap();
        let via_greens = (2.0 * series.value).exp();
        let bound = product.value_error_bound() + via_greens * (2.0 * series.tail_bound).exp_m1();
        prop_assert!((via_greens - product.value).abs() <= bound, "{via_greens} vs {product:?}");
    }

    #[test]
    fn products_stay_finite_in_log_space(
        r in 0.01f64..50.0,
        n in prop::sample::select(vec![100usize, 10_000, 1_000_000]),
    ) {
        let s = sinh_product(r, n).unwrap();
        prop_assert!(s.value.is_finite() && s.log_value.is_finite());
        prop_assert!((s.value - r.sinh()).abs() <= s.value_error_bound());
        let c = cosh_product(r, n).unwrap();
        prop_assert!(c.value.is_finite());
        prop_assert!((c.value - r.cosh()).abs() <= c.value_error_bound());
    }
}
