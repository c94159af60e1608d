//! Integral means `(1/2π)∫|φ(re^{iθ})|^p dθ` of conformal maps of the disk and
//! a numerical finite/infinite verdict for the Hardy norm.
//!
//! Finiteness of `sup_r M_p(r)` cannot be decided from finitely many radii.
//! [`hardy_dichotomy`] instead evaluates `M_p` on a geometric ladder
//! `r_j = 1 − 10^{−j}` and classifies the growth: converging means have
//! small ratios `M_{j+1}/M_j` and increments `M_{j+1} − M_j` that shrink from
//! one rung to the next; diverging means have increments that do not shrink
//! (at least linear growth in `ln 1/(1 − r)`) or ratios above a hard ceiling.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::complex::{principal_arg, principal_pow, DiskPoint};
use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, GradedCircleRule, MIN_NODE_COUNT};

type MapFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;

/// A conformal map of the unit disk with catalogue metadata.
#[derive(Clone)]
pub struct ConformalMapSpec {
    pub name: String,
    evaluate: Arc<MapFn>,
    /// `p*` such that `H^p` is finite exactly for `p < p*` (`+∞` if always).
    pub known_threshold: f64,
    pub target_description: String,
    /// Boundary angles where `φ` has a pole, zero, or branch point; the
    /// quadrature is graded towards them.
    pub boundary_singularities: Vec<f64>,
}

impl fmt::Debug for ConformalMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConformalMapSpec")
            .field("name", &self.name)
            .field("known_threshold", &self.known_threshold)
            .field("target_description", &self.target_description)
            .field("boundary_singularities", &self.boundary_singularities)
            .finish_non_exhaustive()
    }
}

impl ConformalMapSpec {
    pub fn new<F>(
        name: impl Into<String>,
        evaluate: F,
        known_threshold: f64,
        target_description: impl Into<String>,
        boundary_singularities: Vec<f64>,
    ) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        ConformalMapSpec {
            name: name.into(),
            evaluate: Arc::new(evaluate),
            known_threshold,
            target_description: target_description.into(),
            boundary_singularities,
        }
    }

    pub fn evaluate(&self, z: DiskPoint) -> Result<Complex64> {
        self.evaluate_raw(z.value())
    }

    pub(crate) fn evaluate_raw(&self, z: Complex64) -> Result<Complex64> {
        let w = (self.evaluate)(z);
        if w.re.is_finite() && w.im.is_finite() {
            Ok(w)
        } else {
            Err(Error::Evaluation {
                point: z,
                reason: format!("{} returned {w}", self.name),
            })
        }
    }

    /// `z ↦ φ(e^{iθ₀} z)`: another Riemann map onto the same domain.
    pub fn rotated(&self, theta0: f64) -> Self {
        let inner = Arc::clone(&self.evaluate);
        let rotation = Complex64::from_polar(1.0, theta0);
        ConformalMapSpec {
            name: format!("{} ∘ rotation({theta0})", self.name),
            evaluate: Arc::new(move |z| inner(rotation * z)),
            known_threshold: self.known_threshold,
            target_description: self.target_description.clone(),
            boundary_singularities: self.boundary_singularities.iter().map(|s| s - theta0).collect(),
        }
    }

    /// `φ ∘ m_b` with `m_b(z) = (z + b)/(1 + b̄z)`, which sends 0 to `φ(b)`.
    pub fn recentered(&self, b: DiskPoint) -> Self {
        let inner = Arc::clone(&self.evaluate);
        let b = b.value();
        let moved = self
            .boundary_singularities
            .iter()
            .map(|&s| {
                let zeta = Complex64::from_polar(1.0, s);
                principal_arg((zeta - b) / (1.0 - b.conj() * zeta))
            })
            .collect();
        ConformalMapSpec {
            name: format!("{} recentred at {b}", self.name),
            evaluate: Arc::new(move |z| inner((z + b) / (1.0 + b.conj() * z))),
            known_threshold: self.known_threshold,
            target_description: self.target_description.clone(),
            boundary_singularities: moved,
        }
    }
}

/// `z ↦ z`.
pub fn identity_map() -> ConformalMapSpec {
    ConformalMapSpec::new("identity", |z| z, f64::INFINITY, "unit disk", vec![])
}

/// Koebe function `z/(1 − z)²`, onto `ℂ ∖ (−∞, −1/4]`; `H^p` finite iff `p < 1/2`.
pub fn koebe_map() -> ConformalMapSpec {
    ConformalMapSpec::new(
        "koebe",
        |z| z / ((1.0 - z) * (1.0 - z)),
        0.5,
        "plane slit along (-inf, -1/4]",
        vec![0.0],
    )
}

/// `((1 + z)/(1 − z))^{α/π}` onto the wedge `N_α`, sending 0 to 1.
///
/// `(1 + z)/(1 − z)` has positive real part on the disk, so the principal
/// power never meets its branch cut. `H^p` is finite iff `p < π/α`.
pub fn wedge_map(alpha: f64) -> Result<ConformalMapSpec> {
    if !(alpha > 0.0 && alpha <= 2.0 * PI) {
        return Err(Error::invalid(format!("wedge angle must lie in (0, 2π], got {alpha}")));
    }
    let exponent = alpha / PI;
    Ok(ConformalMapSpec::new(
        format!("wedge({alpha})"),
        move |z| principal_pow((1.0 + z) / (1.0 - z), exponent),
        PI / alpha,
        format!("wedge |arg w| < {}", alpha / 2.0),
        vec![0.0, PI],
    ))
}

/// Maps with a known finiteness threshold, used by the property suites.
pub fn catalog() -> Vec<ConformalMapSpec> {
    vec![
        identity_map(),
        koebe_map(),
        wedge_map(PI / 2.0).expect("valid angle"),
        wedge_map(PI).expect("valid angle"),
        wedge_map(1.5 * PI).expect("valid angle"),
    ]
}

/// One integral-mean evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyEstimate {
    pub p: f64,
    pub r: f64,
    /// Total quadrature nodes used.
    pub node_count: usize,
    pub integral_mean: f64,
    pub norm_estimate: f64,
    /// Set when the mean overflowed; `integral_mean` is then `+∞`.
    pub overflow: bool,
}

/// `(1/2π)∫|φ(re^{iθ})|^p dθ` and its `p`-th root.
///
/// `node_count` is the number of nodes per arc between the map's boundary
/// singularities (the whole circle when there are none).
pub fn integral_mean(map: &ConformalMapSpec, p: f64, r: f64, node_count: usize) -> Result<HardyEstimate> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::invalid(format!("exponent p must be positive, got {p}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::invalid(format!("radius must lie in (0, 1), got {r}")));
    }
    if node_count < MIN_NODE_COUNT {
        return Err(Error::invalid(format!(
            "need at least {MIN_NODE_COUNT} nodes, got {node_count}"
        )));
    }
    let rule = GradedCircleRule::new(&map.boundary_singularities, node_count)?;
    let terms = rule
        .angles()
        .par_iter()
        .zip(rule.weights().par_iter())
        .map(|(&t, &w)| {
            let value = map.evaluate_raw(Complex64::from_polar(r, t))?;
            Ok(w * (p * value.norm().ln()).exp())
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = pairwise_sum(&terms);
    let overflow = !mean.is_finite();
    let integral_mean = if overflow { f64::INFINITY } else { mean };
    Ok(HardyEstimate {
        p,
        r,
        node_count: rule.node_count(),
        integral_mean,
        norm_estimate: integral_mean.powf(1.0 / p),
        overflow,
    })
}

/// Radii ladder and ratio thresholds for [`hardy_dichotomy`].
#[derive(Debug, Clone, PartialEq)]
pub struct RatioLadder {
    /// Exponents `j`; radii are `1 − 10^{−j}`.
    pub exponents: Vec<i32>,
    /// Every ratio `M_{j+1}/M_j` at or below this (with shrinking increments) converges.
    pub converge_ratio: f64,
    /// Every ratio above this diverges regardless of increments.
    pub diverge_ratio: f64,
    pub nodes_per_arc: usize,
}

impl Default for RatioLadder {
    fn default() -> Self {
        RatioLadder {
            exponents: vec![3, 4, 5, 6],
            converge_ratio: 1.1,
            diverge_ratio: 2.0,
            nodes_per_arc: 2048,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardyVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

impl fmt::Display for HardyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HardyVerdict::Converging => "converging",
            HardyVerdict::Diverging => "diverging",
            HardyVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyReport {
    pub p: f64,
    pub radii: Vec<f64>,
    pub means: Vec<f64>,
    /// `M_{j+1}/M_j`.
    pub ratios: Vec<f64>,
    /// `(M_{j+2} − M_{j+1})/(M_{j+1} − M_j)`.
    pub increment_ratios: Vec<f64>,
    pub verdict: HardyVerdict,
}

/// Classify `sup_r M_p(r)` as finite or infinite from the growth of `M_p`
/// along `ladder`.
pub fn hardy_dichotomy(map: &ConformalMapSpec, p: f64, ladder: &RatioLadder) -> Result<DichotomyReport> {
    if ladder.exponents.len() < 3 {
        return Err(Error::InsufficientData(
            "ratio ladder needs at least three radii".into(),
        ));
    }
    let radii: Vec<f64> = ladder.exponents.iter().map(|&j| 1.0 - 10f64.powi(-j)).collect();
    let means = radii
        .iter()
        .map(|&r| Ok(integral_mean(map, p, r, ladder.nodes_per_arc)?.integral_mean))
        .collect::<Result<Vec<f64>>>()?;
    let ratios: Vec<f64> = means.windows(2).map(|m| m[1] / m[0]).collect();
    let increments: Vec<f64> = means.windows(2).map(|m| m[1] - m[0]).collect();
    let increment_ratios: Vec<f64> = increments.windows(2).map(|d| d[1] / d[0]).collect();
    let verdict = classify(&ratios, &increment_ratios, ladder);
    Ok(DichotomyReport {
        p,
        radii,
        means,
        ratios,
        increment_ratios,
        verdict,
    })
}

fn classify(ratios: &[f64], increment_ratios: &[f64], ladder: &RatioLadder) -> HardyVerdict {
    if ratios.iter().chain(increment_ratios).any(|x| !x.is_finite()) {
        return HardyVerdict::Diverging;
    }
    let small = ratios.iter().all(|&q| q <= ladder.converge_ratio);
    let shrinking = increment_ratios.iter().all(|&q| q < 1.0);
    let growing = ratios.iter().all(|&q| q > 1.0) && increment_ratios.iter().all(|&q| q >= 1.0);
    let huge = ratios.iter().all(|&q| q > ladder.diverge_ratio);
    if small && shrinking {
        HardyVerdict::Converging
    } else if growing || huge {
        HardyVerdict::Diverging
    } else {
        HardyVerdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_mean_is_power_of_radius() {
        for p in [0.5, 1.0, 3.0] {
            let e = integral_mean(&identity_map(), p, 0.5, 64).unwrap();
            assert!((e.integral_mean - 0.5f64.powf(p)).abs() < 1e-15);
            assert!((e.norm_estimate - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn koebe_square_mean_matches_parseval() {
        // Σ n² r^{2n} = r²(1 + r²)/(1 − r²)³.
        for r in [0.3, 0.5, 0.9, 0.999] {
            let e = integral_mean(&koebe_map(), 2.0, r, 1024).unwrap();
            let r2 = r * r;
            let exact = r2 * (1.0 + r2) / (1.0 - r2).powi(3);
            assert!((e.integral_mean / exact - 1.0).abs() < 1e-11, "r = {r}");
        }
    }

    #[test]
    fn cayley_square_mean_matches_parseval() {
        // (1 + z)/(1 − z) = 1 + 2Σ zⁿ.
        let cayley = wedge_map(PI).unwrap();
        for r in [0.5, 0.99, 1.0 - 1e-5] {
            let e = integral_mean(&cayley, 2.0, r, 1024).unwrap();
            let exact = 1.0 + 4.0 * r * r / (1.0 - r * r);
            assert!((e.integral_mean / exact - 1.0).abs() < 1e-10, "r = {r}");
        }
    }

    #[test]
    fn koebe_means_match_high_precision_quadrature() {
        // Reference values from adaptive 30-digit quadrature.
        let cases = [
            (0.25, 1e-3, 1.168_277_267),
            (0.4, 1e-4, 1.854_704_392),
            (0.6, 1e-5, 16.838_130_06),
            (0.75, 1e-6, 834.356_956_7),
        ];
        for (p, gap, expected) in cases {
            let e = integral_mean(&koebe_map(), p, 1.0 - gap, 2048).unwrap();
            assert!(
                (e.integral_mean / expected - 1.0).abs() < 1e-8,
                "p {p}: {}",
                e.integral_mean
            );
        }
    }

    #[test]
    fn wedge_map_examples() {
        let half = wedge_map(PI / 2.0).unwrap();
        let w = half.evaluate(DiskPoint::new(0.5, 0.0).unwrap()).unwrap();
        assert!((w - Complex64::new(3f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(half.known_threshold, 2.0);
        let cayley = wedge_map(PI).unwrap();
        assert_eq!(
            cayley.evaluate(DiskPoint::new(0.0, 0.0).unwrap()).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert!(wedge_map(0.0).is_err());
        assert!(wedge_map(7.0).is_err());
    }

    #[test]
    fn wedge_map_lands_in_the_wedge() {
        let alpha = 0.8;
        let map = wedge_map(alpha).unwrap();
        for k in 0..50 {
            let z = DiskPoint::from_polar(0.99, k as f64 * 0.37).unwrap();
            let w = map.evaluate(z).unwrap();
            assert!(principal_arg(w).abs() < alpha / 2.0);
        }
    }

    #[test]
    fn koebe_stabilises_below_threshold_and_grows_above() {
        let low: Vec<f64> = [1e-3, 1e-4]
            .iter()
            .map(|g| integral_mean(&koebe_map(), 0.25, 1.0 - g, 1024).unwrap().integral_mean)
            .collect();
        assert!((low[1] / low[0] - 1.0).abs() < 0.01);
        let high: Vec<f64> = [1e-3, 1e-4]
            .iter()
            .map(|g| integral_mean(&koebe_map(), 0.75, 1.0 - g, 1024).unwrap().integral_mean)
            .collect();
        assert!(high[1] > 2.0 * high[0]);
    }

    #[test]
    fn invalid_inputs() {
        let m = identity_map();
        assert!(integral_mean(&m, 0.0, 0.5, 64).is_err());
        assert!(integral_mean(&m, 1.0, 1.0, 64).is_err());
        assert!(integral_mean(&m, 1.0, 0.5, 8).is_err());
    }

    #[test]
    fn evaluation_failure_is_reported() {
        let bad = ConformalMapSpec::new("bad", |_| Complex64::new(f64::NAN, 0.0), 1.0, "", vec![]);
        assert!(matches!(
            integral_mean(&bad, 1.0, 0.5, 64),
            Err(Error::Evaluation { .. })
        ));
    }

    #[test]
    fn overflow_is_flagged() {
        let huge = ConformalMapSpec::new("huge", |_| Complex64::new(1e300, 0.0), 1.0, "", vec![]);
        let e = integral_mean(&huge, 4.0, 0.5, 64).unwrap();
        assert!(e.overflow);
        assert_eq!(e.integral_mean, f64::INFINITY);
    }

    #[test]
    fn dichotomy_separates_both_sides_of_the_threshold() {
        let ladder = RatioLadder::default();
        let cases = [
            (koebe_map(), 0.4, HardyVerdict::Converging),
            (koebe_map(), 0.6, HardyVerdict::Diverging),
            (wedge_map(PI / 2.0).unwrap(), 1.6, HardyVerdict::Converging),
            (wedge_map(PI / 2.0).unwrap(), 2.4, HardyVerdict::Diverging),
        ];
        for (map, p, expected) in cases {
            let report = hardy_dichotomy(&map, p, &ladder).unwrap();
            assert_eq!(report.verdict, expected, "{} p = {p}: {report:?}", map.name);
        }
    }

    #[test]
    fn classification_rules() {
        let ladder = RatioLadder::default();
        assert_eq!(
            classify(&[1.07, 1.04, 1.03], &[0.6, 0.6], &ladder),
            HardyVerdict::Converging
        );
        assert_eq!(
            classify(&[1.7, 1.65, 1.62], &[1.5, 1.6], &ladder),
            HardyVerdict::Diverging
        );
        assert_eq!(
            classify(&[3.0, 3.0, 3.0], &[0.9, 0.9], &ladder),
            HardyVerdict::Diverging
        );
        assert_eq!(
            classify(&[1.3, 1.2, 1.1], &[0.7, 0.7], &ladder),
            HardyVerdict::Inconclusive
        );
    }
}
