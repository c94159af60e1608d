//! Infinite products for `sinh`, `cosh`, `sin`, `cos` and the two-parameter
//! identity
//!
//! ```text
//! ∏_{n∈ℤ} ((b + 2πn)² + (r + c)²)/((b + 2πn)² + (r − c)²)
//!     = |(1 − e^{−r−c+ib})/(e^{−r} − e^{−c+ib})|²
//! ```
//!
//! All products are summed in log space. The omitted factors are estimated by
//! the midpoint rule `Σ_{n>N} g(x_n) ≈ (1/Δ)∫_X^∞ g` with closed-form
//! antiderivatives, and `residual_bound` covers that rule's error through a
//! decreasing majorant of `|g''|`, plus a rounding allowance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::pairwise_sum;

const PARALLEL_TERMS: usize = 1 << 15;
/// A factor closer to zero than this switches reporting to absolute error.
const NEAR_ZERO: f64 = 1e-6;

/// `(b, r, c)` of the two-parameter identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductParams {
    pub b: f64,
    pub r: f64,
    pub c: f64,
}

impl ProductParams {
    pub fn new(b: f64, r: f64, c: f64) -> Result<Self> {
        if !(b.is_finite() && r.is_finite() && c.is_finite()) {
            return Err(Error::NonFinite {
                what: "product parameter",
            });
        }
        if !(r > 0.0 && c > 0.0) {
            return Err(Error::invalid(format!(
                "r and c must be positive, got r = {r}, c = {c}"
            )));
        }
        if r == c && reduce_angle(b) == 0.0 {
            return Err(Error::Singular(
                "b ≡ 0 (mod 2π) with r = c makes the n = 0 factor singular".into(),
            ));
        }
        Ok(ProductParams { b, r, c })
    }
}

/// `b − 2πm` in `[−π, π]`.
fn reduce_angle(b: f64) -> f64 {
    b - 2.0 * PI * (b / (2.0 * PI)).round()
}

/// A truncated, tail-corrected product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductResult {
    /// Tail-corrected product.
    pub value: f64,
    /// `ln|value|`; `−∞` when a factor vanishes.
    pub log_value: f64,
    /// Sign of `value` (0 when it vanishes).
    pub sign: f64,
    /// Truncation index.
    pub n: usize,
    /// Estimate of the log of the omitted factors, already included in `value`.
    pub tail_correction: f64,
    /// Bound on `|ln(true product) − log_value|`.
    pub residual_bound: f64,
    /// Bound on `|true product − value|`.
    pub absolute_error_bound: f64,
    /// Some factor is within `1e−6` of zero; judge the result by
    /// `absolute_error_bound`, not relative error.
    pub near_zero: bool,
}

impl ProductResult {
    /// The plain truncated product, without the tail correction.
    pub fn uncorrected(&self) -> f64 {
        self.sign * (self.log_value - self.tail_correction).exp()
    }

    pub fn value_error_bound(&self) -> f64 {
        self.absolute_error_bound
    }
}

/// Factor `1 + q/(x² + d²)` (with `s² = q + d²`) or `1 − r²/x²`.
#[derive(Debug, Clone, Copy)]
enum Factor {
    Plus { s: f64, d: f64 },
    Minus { r: f64 },
}

struct Term {
    log: f64,
    negative: bool,
    /// `|factor|`, to detect near-zeros.
    modulus: f64,
    /// Extra rounding sensitivity beyond `|log|`.
    conditioning: f64,
}

impl Factor {
    fn term(self, x: f64) -> Term {
        match self {
            Factor::Plus { s, d } => {
                let q = (s - d) * (s + d);
                let log = (q / (x * x + d * d)).ln_1p();
                Term {
                    log,
                    negative: false,
                    modulus: log.exp(),
                    conditioning: 0.0,
                }
            }
            Factor::Minus { r } => {
                let ratio = r * r / (x * x);
                let t = (x - r) * (x + r) / (x * x);
                let log = if ratio < 0.5 { (-ratio).ln_1p() } else { t.abs().ln() };
                Term {
                    log,
                    negative: t < 0.0,
                    modulus: t.abs(),
                    conditioning: ratio / t.abs(),
                }
            }
        }
    }

    /// `∫_X^∞ ln(factor(x)) dx`.
    fn tail_integral(self, x: f64) -> f64 {
        match self {
            Factor::Plus { s, d } => {
                let q = (s - d) * (s + d);
                2.0 * s * (s / x).atan() - 2.0 * d * (d / x).atan() - x * (q / (x * x + d * d)).ln_1p()
            }
            Factor::Minus { r } => -x * (-(r * r) / (x * x)).ln_1p() - r * ((r / x).ln_1p() - (-r / x).ln_1p()),
        }
    }

    /// Midpoint-rule error for `Σ_{k≥0} g(X + (k + ½)Δ)` against `(1/Δ)∫_X^∞ g`:
    /// `(Δ²/24)[M(X) + (1/Δ)∫_X^∞ M]` with `M ≥ |g''|` decreasing.
    fn midpoint_error(self, x: f64, delta: f64) -> f64 {
        let (m, integral) = match self {
            Factor::Plus { s, d } => {
                let q = (s - d) * (s + d);
                (6.0 * q / x.powi(4), 2.0 * q / x.powi(3))
            }
            Factor::Minus { r } => {
                let gap = x * x - r * r;
                (6.0 * r * r / (gap * gap), 32.0 * r * r / (9.0 * x.powi(3)))
            }
        };
        delta * delta / 24.0 * (m + integral / delta)
    }

    /// Smallest tail start `X` for which the bounds above hold.
    fn valid_from(self) -> f64 {
        match self {
            Factor::Plus { .. } => 0.0,
            Factor::Minus { r } => 2.0 * r,
        }
    }
}

/// One run of nodes `x_k = first + kΔ`, `k = 0..count`, and its infinite tail.
#[derive(Clone, Copy)]
struct Side {
    first: f64,
    delta: f64,
    count: usize,
}

impl Side {
    fn nodes(self) -> impl IndexedParallelIterator<Item = f64> {
        (0..self.count)
            .into_par_iter()
            .map(move |k| self.first + self.delta * k as f64)
    }

    fn tail_start(self) -> f64 {
        self.first + self.delta * (self.count as f64 - 0.5)
    }
}

struct Accumulated {
    log: f64,
    negative: bool,
    zero_factor: bool,
    near_zero: bool,
    magnitude: f64,
    conditioning: f64,
    tail_correction: f64,
    tail_error: f64,
    terms: usize,
}

fn accumulate(factor: Factor, sides: &[Side], prefix: &[Term], n: usize) -> Result<Accumulated> {
    let mut terms: Vec<Term> = Vec::new();
    for side in sides {
        let start = side.tail_start();
        if start < factor.valid_from() {
            let required = ((factor.valid_from() - start) / side.delta).ceil() as usize + n;
            return Err(Error::TruncationTooSmall { n, required });
        }
        if side.count >= PARALLEL_TERMS {
            terms.par_extend(side.nodes().map(|x| factor.term(x)));
        } else {
            terms.extend((0..side.count).map(|k| factor.term(side.first + side.delta * k as f64)));
        }
    }
    let all: Vec<&Term> = prefix.iter().chain(terms.iter()).collect();
    let logs: Vec<f64> = all.iter().map(|t| t.log).collect();
    let zero_factor = all.iter().any(|t| t.modulus == 0.0);
    let finite_logs: Vec<f64> = logs.iter().copied().filter(|l| l.is_finite()).collect();
    let negative = all.iter().filter(|t| t.negative).count() % 2 == 1;
    let mut tail_correction = 0.0;
    let mut tail_error = 0.0;
    for side in sides {
        let x = side.tail_start();
        tail_correction += factor.tail_integral(x) / side.delta;
        tail_error += factor.midpoint_error(x, side.delta);
    }
    Ok(Accumulated {
        log: pairwise_sum(&finite_logs),
        negative,
        zero_factor,
        near_zero: all.iter().any(|t| t.modulus < NEAR_ZERO),
        magnitude: finite_logs.iter().map(|l| l.abs()).sum(),
        conditioning: all.iter().map(|t| t.conditioning).filter(|c| c.is_finite()).sum(),
        tail_correction,
        tail_error,
        terms: all.len(),
    })
}

fn finish(acc: Accumulated, n: usize) -> ProductResult {
    let rounding = 8.0
        * f64::EPSILON
        * ((2.0 + (acc.terms as f64).log2()) * (acc.magnitude + acc.tail_correction.abs()) + acc.conditioning);
    let residual_bound = acc.tail_error + rounding;
    let log_rest = acc.log + acc.tail_correction;
    if acc.zero_factor {
        // A vanishing factor (x − r)(x + r)/x² is really at most 2ε in size.
        return ProductResult {
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            sign: 0.0,
            n,
            tail_correction: acc.tail_correction,
            residual_bound: f64::INFINITY,
            absolute_error_bound: 2.0 * f64::EPSILON * (log_rest + residual_bound).exp(),
            near_zero: true,
        };
    }
    let sign = if acc.negative { -1.0 } else { 1.0 };
    let magnitude = log_rest.exp();
    ProductResult {
        value: sign * magnitude,
        log_value: log_rest,
        sign,
        n,
        tail_correction: acc.tail_correction,
        residual_bound,
        absolute_error_bound: magnitude * residual_bound.exp_m1(),
        near_zero: acc.near_zero,
    }
}

fn check_truncation(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::TruncationTooSmall { n, required: 1 })
    } else {
        Ok(())
    }
}

/// Right-hand side `|(1 − e^{−r−c+ib})/(e^{−r} − e^{−c+ib})|²`.
pub fn mirror_closed_form(params: ProductParams) -> f64 {
    let ProductParams { b, r, c } = params;
    let num = 1.0 - Complex64::new(-r - c, b).exp();
    let den = Complex64::new((-r).exp(), 0.0) - Complex64::new(-c, b).exp();
    (num / den).norm_sqr()
}

/// Symmetric product over `n ∈ [−N, N]` with tail correction.
pub fn mirror_product(params: ProductParams, n: usize) -> Result<ProductResult> {
    check_truncation(n)?;
    let ProductParams { b, r, c } = ProductParams::new(params.b, params.r, params.c)?;
    let b = reduce_angle(b);
    let factor = Factor::Plus {
        s: r + c,
        d: (r - c).abs(),
    };
    let two_pi = 2.0 * PI;
    let centre = factor.term(b);
    if !centre.log.is_finite() {
        return Err(Error::Singular("n = 0 factor is singular".into()));
    }
    let sides = [
        Side {
            first: two_pi + b,
            delta: two_pi,
            count: n,
        },
        Side {
            first: two_pi - b,
            delta: two_pi,
            count: n,
        },
    ];
    Ok(finish(accumulate(factor, &sides, &[centre], n)?, n))
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("r must be finite and ≥ 0, got {r}")))
    }
}

/// `sinh r = r ∏_{n≥1}(1 + (r/πn)²)`.
pub fn sinh_product(r: f64, n: usize) -> Result<ProductResult> {
    check_truncation(n)?;
    check_radius(r)?;
    if r == 0.0 {
        return Err(Error::invalid("sinh product needs r > 0"));
    }
    let lead = Term {
        log: r.ln(),
        negative: false,
        modulus: r,
        conditioning: 0.0,
    };
    let side = Side {
        first: PI,
        delta: PI,
        count: n,
    };
    Ok(finish(
        accumulate(Factor::Plus { s: r, d: 0.0 }, &[side], &[lead], n)?,
        n,
    ))
}

/// `cosh r = ∏_{n≥1}(1 + (r/(π(n − ½)))²)`.
pub fn cosh_product(r: f64, n: usize) -> Result<ProductResult> {
    check_truncation(n)?;
    check_radius(r)?;
    let side = Side {
        first: 0.5 * PI,
        delta: PI,
        count: n,
    };
    Ok(finish(accumulate(Factor::Plus { s: r, d: 0.0 }, &[side], &[], n)?, n))
}

/// `(sin r, cos r)` from `r ∏(1 − (r/πn)²)` and `∏(1 − (r/(π(n − ½)))²)`.
///
/// The truncation must leave every omitted node beyond `2|r|`.
pub fn sin_cos_products(r: f64, n: usize) -> Result<(ProductResult, ProductResult)> {
    check_truncation(n)?;
    if !r.is_finite() {
        return Err(Error::NonFinite { what: "r" });
    }
    let a = r.abs();
    let factor = Factor::Minus { r: a };
    let cos_side = Side {
        first: 0.5 * PI,
        delta: PI,
        count: n,
    };
    let cos = finish(accumulate(factor, &[cos_side], &[], n)?, n);
    let sin_side = Side {
        first: PI,
        delta: PI,
        count: n,
    };
    let sin = if a == 0.0 {
        ProductResult {
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            sign: 0.0,
            n,
            tail_correction: 0.0,
            residual_bound: 0.0,
            absolute_error_bound: 0.0,
            near_zero: true,
        }
    } else {
        let lead = Term {
            log: a.ln(),
            negative: r < 0.0,
            modulus: a,
            conditioning: 0.0,
        };
        finish(accumulate(factor, &[sin_side], &[lead], n)?, n)
    };
    Ok((sin, cos))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_reduces_to_cosh_squared() {
        let res = mirror_product(ProductParams::new(PI, 1.0, 1.0).unwrap(), 10_000).unwrap();
        let exact = 1f64.cosh().powi(2);
        assert!((exact - 2.381_097_845_541_815_7).abs() < 1e-15);
        assert!((res.value - exact).abs() <= res.value_error_bound());
        assert!((mirror_closed_form(ProductParams::new(PI, 1.0, 1.0).unwrap()) - exact).abs() < 1e-14);
    }

    #[test]
    fn mirror_at_b_zero_is_a_sinh_ratio() {
        let params = ProductParams::new(0.0, 2.0, 1.0).unwrap();
        let res = mirror_product(params, 10_000).unwrap();
        let exact = (1.5f64.sinh() / 0.5f64.sinh()).powi(2);
        assert!((exact - 16.696_713_921_4).abs() < 1e-9);
        assert!((res.value - exact).abs() <= res.value_error_bound(), "{res:?}");
    }

    #[test]
    fn mirror_rejects_the_singular_case() {
        assert!(matches!(ProductParams::new(0.0, 1.0, 1.0), Err(Error::Singular(_))));
        assert!(matches!(
            ProductParams::new(4.0 * PI, 1.0, 1.0),
            Err(Error::Singular(_))
        ));
        assert!(ProductParams::new(0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn mirror_is_periodic_in_b() {
        let a = mirror_product(ProductParams::new(1.0, 0.7, 0.3).unwrap(), 500).unwrap();
        let b = mirror_product(ProductParams::new(1.0 + 6.0 * PI, 0.7, 0.3).unwrap(), 500).unwrap();
        assert!((a.value - b.value).abs() <= a.value_error_bound() + b.value_error_bound());
    }

    #[test]
    fn sinh_examples() {
        let res = sinh_product(1.0, 100_000).unwrap();
        assert!((res.value - 1.175_201_193_6).abs() < 1e-6);
        let res = sinh_product(3.0, 100_000).unwrap();
        assert!((res.value - 10.017_874_927_4).abs() < 1e-4);
        let res = sinh_product(1e-8, 10).unwrap();
        assert!((res.value / 1e-8 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosh_examples() {
        assert!((cosh_product(1.0, 100_000).unwrap().value - 1.543_080_634_8).abs() < 1e-5);
        assert!((cosh_product(1e-8, 10).unwrap().value - 1.0).abs() < 1e-15);
        assert!((cosh_product(2.0, 100_000).unwrap().value - 3.762_195_691_1).abs() < 1e-4);
    }

    #[test]
    fn sin_cos_examples() {
        let (s, _) = sin_cos_products(PI / 2.0, 100_000).unwrap();
        assert!((s.value - 1.0).abs() < 1e-5);
        let (s, c) = sin_cos_products(0.0, 10).unwrap();
        assert_eq!((s.value, c.value), (0.0, 1.0));
        let (_, c) = sin_cos_products(1.0, 100_000).unwrap();
        assert!((c.value - 0.540_302_305_9).abs() < 1e-4);
    }

    #[test]
    fn sin_cos_track_signs() {
        for r in [-4.0, -1.0, 2.0, 4.0, 5.0, 7.5] {
            let (s, c) = sin_cos_products(r, 2000).unwrap();
            assert!((s.value - f64::sin(r)).abs() <= s.value_error_bound(), "sin {r}: {s:?}");
            assert!((c.value - f64::cos(r)).abs() <= c.value_error_bound(), "cos {r}: {c:?}");
        }
    }

    #[test]
    fn near_zeros_are_flagged() {
        let (s, _) = sin_cos_products(PI, 1000).unwrap();
        assert!(s.near_zero);
        assert!((s.value - PI.sin()).abs() <= s.value_error_bound().max(1e-15), "{s:?}");
        let (_, c) = sin_cos_products(PI / 2.0, 1000).unwrap();
        assert!(c.near_zero);
        assert!(c.value.abs() <= c.value_error_bound() + 1e-15);
    }

    #[test]
    fn truncation_must_clear_the_zeros() {
        assert!(matches!(
            sin_cos_products(40.0, 10),
            Err(Error::TruncationTooSmall { .. })
        ));
        assert!(sinh_product(1.0, 0).is_err());
    }

    #[test]
    fn bounds_cover_the_true_values() {
        for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
            for n in [10, 100, 1000] {
                let s = sinh_product(r, n).unwrap();
                assert!((s.value - r.sinh()).abs() <= s.value_error_bound(), "sinh {r} {n}");
                let c = cosh_product(r, n).unwrap();
                assert!((c.value - r.cosh()).abs() <= c.value_error_bound(), "cosh {r} {n}");
            }
        }
    }

    #[test]
    fn large_arguments_do_not_overflow() {
        let s = sinh_product(50.0, 1_000_000).unwrap();
        assert!(s.value.is_finite());
        assert!((s.log_value - 50f64.sinh().ln()).abs() < 1e-9);
        let c = cosh_product(50.0, 1_000_000).unwrap();
        assert!((c.log_value - 50f64.cosh().ln()).abs() < 1e-9);
    }
}
