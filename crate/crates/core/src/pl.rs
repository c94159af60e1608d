//! Phragmén–Lindelöf predicate on wedges and star-like domains.
//!
//! The principle cannot be checked numerically, so [`pl_verdict`] is a
//! three-valued demonstrator: it combines an estimated boundary bound `K`, a
//! fitted growth order and the domain threshold `p*`, and attaches interior
//! samples of `|f|` as corroboration. Moduli are handled through `ln|f|` so
//! functions such as `e^{z²}` can be sampled far out without overflow.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::complex::{principal_arg, principal_pow};
use crate::domain::{hansen_threshold, StarDomainSpec};
use crate::error::{Error, Result};
use crate::quadrature::{try_circle_mean, CircleQuadrature};

type AnalyticFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;
type LogModulusFn = dyn Fn(Complex64) -> f64 + Send + Sync;

/// Outer radius and grid used to turn a star-like domain into `p*`.
const STAR_R_MAX: f64 = 1e6;
const STAR_GRID: usize = 36_000;

/// Where the function lives, and hence which finiteness threshold applies.
#[derive(Debug, Clone)]
pub enum PlDomain {
    /// `N_α = {|arg z| < α/2}`, threshold `π/α`.
    Wedge { alpha: f64 },
    /// Star-like or spiral-like domain, threshold `π/(A_W cos²σ)`.
    Star(StarDomainSpec),
    /// No geometry supplied; any simply connected proper domain has `p* = 1/2`.
    SimplyConnected,
}

impl PlDomain {
    pub fn wedge(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0 * PI) {
            return Err(Error::invalid(format!("wedge angle must lie in (0, 2π], got {alpha}")));
        }
        Ok(PlDomain::Wedge { alpha })
    }

    pub fn p_star(&self) -> Result<f64> {
        match self {
            PlDomain::Wedge { alpha } => Ok(PI / alpha),
            PlDomain::Star(d) => hansen_threshold(d, STAR_R_MAX, STAR_GRID),
            PlDomain::SimplyConnected => Ok(0.5),
        }
    }

    /// `None` when no geometry is known.
    pub fn contains(&self, z: Complex64) -> Option<bool> {
        match self {
            PlDomain::Wedge { alpha } => Some(z.norm() > 0.0 && principal_arg(z).abs() < alpha / 2.0),
            PlDomain::Star(d) => Some(d.contains(z)),
            PlDomain::SimplyConnected => None,
        }
    }
}

/// An analytic function on a domain, with an optional overflow-free `ln|f|`.
#[derive(Clone)]
pub struct AnalyticFunctionSpec {
    pub name: String,
    evaluate: Arc<AnalyticFn>,
    log_modulus: Option<Arc<LogModulusFn>>,
    pub domain: PlDomain,
}

impl fmt::Debug for AnalyticFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunctionSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl AnalyticFunctionSpec {
    pub fn new<F>(name: impl Into<String>, evaluate: F, domain: PlDomain) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        AnalyticFunctionSpec {
            name: name.into(),
            evaluate: Arc::new(evaluate),
            log_modulus: None,
            domain,
        }
    }

    /// Supply `ln|f|` directly, e.g. `Re(z²)` for `e^{z²}`.
    pub fn with_log_modulus<L>(mut self, log_modulus: L) -> Self
    where
        L: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        self.log_modulus = Some(Arc::new(log_modulus));
        self
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let w = (self.evaluate)(z);
        if w.re.is_nan() || w.im.is_nan() {
            return Err(Error::Evaluation {
                point: z,
                reason: format!("{} returned {w}", self.name),
            });
        }
        Ok(w)
    }

    /// `ln|f(z)|`; `−∞` at zeros of `f`.
    pub fn log_modulus(&self, z: Complex64) -> Result<f64> {
        let value = match &self.log_modulus {
            Some(l) => l(z),
            None => self.evaluate(z)?.norm().ln(),
        };
        if value.is_nan() || value == f64::INFINITY {
            return Err(Error::Evaluation {
                point: z,
                reason: format!("ln|{}| = {value}", self.name),
            });
        }
        Ok(value)
    }
}

/// `max(ln x, 0)`.
pub fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// Points of the boundary of `f.domain` inside `|z| ≤ radius_cap`.
fn boundary_points(domain: &PlDomain, samples: usize, radius_cap: f64) -> Result<Vec<Complex64>> {
    if samples < 2 {
        return Err(Error::invalid("boundary sampling needs at least 2 samples"));
    }
    if !(radius_cap > 0.0 && radius_cap.is_finite()) {
        return Err(Error::invalid(format!("radius cap must be positive, got {radius_cap}")));
    }
    let radial = |theta: f64, from: f64, to: f64| {
        (0..samples).map(move |i| Complex64::from_polar(from + (to - from) * i as f64 / (samples - 1) as f64, theta))
    };
    match domain {
        PlDomain::Wedge { alpha } => {
            let mut pts: Vec<Complex64> = radial(alpha / 2.0, 0.0, radius_cap).collect();
            if *alpha < 2.0 * PI {
                pts.extend(radial(-alpha / 2.0, 0.0, radius_cap));
            }
            Ok(pts)
        }
        PlDomain::Star(d) => {
            let step = 2.0 * PI / samples as f64;
            let thetas: Vec<f64> = (0..samples).map(|j| -PI + step * (j as f64 + 0.5)).collect();
            let rhos: Vec<f64> = thetas.iter().map(|&t| d.rho(t)).collect();
            let mut pts = Vec::new();
            for j in 0..samples {
                let (t, rho) = (thetas[j], rhos[j]);
                if rho <= radius_cap {
                    pts.push(Complex64::from_polar(rho, t));
                }
                // A jump in ρ between neighbouring angles is a radial boundary segment.
                let next = rhos[(j + 1) % samples];
                let (lo, hi) = if rho < next { (rho, next) } else { (next, rho) };
                if hi > lo && lo < radius_cap {
                    let edge = if rho < next { t } else { thetas[(j + 1) % samples] };
                    pts.extend(radial(edge, lo, hi.min(radius_cap)));
                }
            }
            Ok(pts)
        }
        PlDomain::SimplyConnected => Err(Error::invalid("no boundary parameterisation without domain geometry")),
    }
}

fn max_log_modulus(f: &AnalyticFunctionSpec, points: &[Complex64]) -> Result<f64> {
    let logs = points
        .par_iter()
        .map(|&z| f.log_modulus(z))
        .collect::<Result<Vec<f64>>>()?;
    Ok(logs.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// `max |f|` over the sampled boundary truncated at `radius_cap`.
pub fn boundary_sup(f: &AnalyticFunctionSpec, samples: usize, radius_cap: f64) -> Result<f64> {
    let points = boundary_points(&f.domain, samples, radius_cap)?;
    Ok(max_log_modulus(f, &points)?.exp())
}

/// Boundary sups over increasing truncation radii.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryBound {
    pub radius_caps: Vec<f64>,
    pub sups: Vec<f64>,
    /// `+∞` when the sup keeps growing with the cap.
    pub k: f64,
}

/// Estimate `K = limsup_{z→∂W}|f|`; a sup that grows by more than `rel_growth`
/// at every enlargement of the cap is reported as `K = +∞`.
pub fn boundary_bound(
    f: &AnalyticFunctionSpec,
    samples: usize,
    radius_caps: &[f64],
    rel_growth: f64,
) -> Result<BoundaryBound> {
    if radius_caps.len() < 2 || radius_caps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("need at least two strictly increasing radius caps"));
    }
    let sups = radius_caps
        .iter()
        .map(|&cap| boundary_sup(f, samples, cap))
        .collect::<Result<Vec<f64>>>()?;
    let growing = sups.windows(2).all(|s| s[1] > s[0] * (1.0 + rel_growth));
    let k = if growing {
        f64::INFINITY
    } else {
        *sups.last().expect("non-empty")
    };
    Ok(BoundaryBound {
        radius_caps: radius_caps.to_vec(),
        sups,
        k,
    })
}

/// `ln ln⁺|f(z)| ≈ p ln|z| + ln C` along a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub c: f64,
    pub p: f64,
    /// Root-mean-square deviation of the fit in `ln ln⁺|f|`.
    pub residual: f64,
    /// `|f| ≤ 1` on every sample, reported as growth order 0.
    pub bounded: bool,
}

/// `count` radii spaced geometrically from `r_min` to `r_max`.
pub fn geometric_radii(r_min: f64, r_max: f64, count: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) || count < 2 {
        return Err(Error::invalid("need 0 < r_min < r_max and at least two radii"));
    }
    let ratio = (r_max / r_min).ln() / (count - 1) as f64;
    Ok((0..count).map(|i| r_min * (ratio * i as f64).exp()).collect())
}

/// Least-squares growth order along the ray at `ray_angle`.
pub fn growth_fit(f: &AnalyticFunctionSpec, ray_angle: f64, radii: &[f64]) -> Result<GrowthFit> {
    let points: Vec<Complex64> = radii.iter().map(|&r| Complex64::from_polar(r, ray_angle)).collect();
    if let Some(z) = points.iter().find(|&&z| f.domain.contains(z) == Some(false)) {
        return Err(Error::OutsideDomain {
            what: "growth ray sample",
            value: *z,
            domain: "the function's domain",
        });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&r, &z) in radii.iter().zip(&points) {
        let l = f.log_modulus(z)?;
        if l > 0.0 {
            xs.push(r.ln());
            ys.push(l.ln());
        }
    }
    if xs.is_empty() {
        return Ok(GrowthFit {
            c: 1.0,
            p: 0.0,
            residual: 0.0,
            bounded: true,
        });
    }
    if xs.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "growth fit needs 5 radii with |f| > 1, found {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("growth fit radii are not distinct".into()));
    }
    let p = sxy / sxx;
    let intercept = my - p * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - p * x).powi(2)).sum();
    Ok(GrowthFit {
        c: intercept.exp(),
        p,
        residual: (sse / n).sqrt(),
        bounded: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlConclusion {
    BoundedByK,
    HypothesisViolated,
    Inconclusive,
}

impl fmt::Display for PlConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlConclusion::BoundedByK => "bounded-by-K",
            PlConclusion::HypothesisViolated => "hypothesis-violated",
            PlConclusion::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictConfig {
    /// Relative margin around `p*` treated as a tie.
    pub margin: f64,
    /// Interior samples reach out to this radius.
    pub interior_radius: f64,
    /// Samples per interior ray.
    pub interior_samples: usize,
    /// Allowed excess of interior `|f|` over `K`.
    pub tolerance: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            margin: 0.05,
            interior_radius: 10.0,
            interior_samples: 200,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlVerdict {
    pub k: f64,
    pub p_fit: f64,
    pub p_star: f64,
    pub conclusion: PlConclusion,
    /// Largest interior `|f|` found (may be `+∞` if it overflows).
    pub interior_max: f64,
    /// Where `interior_max` was attained.
    pub interior_argmax: Complex64,
    /// Interior samples stay within `K + tolerance`.
    pub corroborated: bool,
}

/// Interior sample points: five rays spread across the opening, geometric radii.
fn interior_points(domain: &PlDomain, fit_ray: f64, config: &VerdictConfig) -> Result<Vec<Complex64>> {
    let radii = geometric_radii(
        1e-3 * config.interior_radius,
        config.interior_radius,
        config.interior_samples,
    )?;
    let angles: Vec<f64> = match domain {
        PlDomain::Wedge { alpha } => [-0.45, -0.25, 0.0, 0.25, 0.45].iter().map(|s| s * alpha).collect(),
        PlDomain::Star(_) => (0..16).map(|j| -PI + 2.0 * PI * (j as f64 + 0.5) / 16.0).collect(),
        PlDomain::SimplyConnected => vec![fit_ray],
    };
    Ok(angles
        .iter()
        .flat_map(|&t| radii.iter().map(move |&r| Complex64::from_polar(r, t)))
        .filter(|&z| domain.contains(z) != Some(false))
        .collect())
}

/// Three-valued Phragmén–Lindelöf verdict.
///
/// * `K = +∞` (boundary unbounded): inconclusive.
/// * an interior sample above `K + tolerance`, or `p_fit > p*(1 + margin)`:
///   hypothesis violated.
/// * `p_fit < p*(1 − margin)`: bounded by `K`.
/// * otherwise (a tie within the margin, no counterexample): inconclusive.
pub fn pl_verdict(
    f: &AnalyticFunctionSpec,
    k: f64,
    fit: &GrowthFit,
    p_star: f64,
    ray_angle: f64,
    config: &VerdictConfig,
) -> Result<PlVerdict> {
    if k.is_nan() || k < 0.0 {
        return Err(Error::invalid(format!("boundary bound must be ≥ 0, got {k}")));
    }
    let points = interior_points(&f.domain, ray_angle, config)?;
    let mut interior_log = f64::NEG_INFINITY;
    let mut interior_argmax = Complex64::new(0.0, 0.0);
    for z in points {
        let l = f.log_modulus(z)?;
        if l > interior_log {
            interior_log = l;
            interior_argmax = z;
        }
    }
    let interior_max = interior_log.exp();
    let exceeds = k.is_finite() && interior_max > k + config.tolerance;
    let conclusion = if !k.is_finite() {
        PlConclusion::Inconclusive
    } else if exceeds || fit.p > p_star * (1.0 + config.margin) {
        PlConclusion::HypothesisViolated
    } else if fit.p < p_star * (1.0 - config.margin) {
        PlConclusion::BoundedByK
    } else {
        PlConclusion::Inconclusive
    };
    Ok(PlVerdict {
        k,
        p_fit: fit.p,
        p_star,
        conclusion,
        interior_max,
        interior_argmax,
        corroborated: !exceeds,
    })
}

/// `log⁺|f(center)| − mean of log⁺|f|` over the circle; ≤ 0 up to quadrature
/// error for analytic `f`.
pub fn subharmonic_residual(
    f: &AnalyticFunctionSpec,
    center: Complex64,
    radius: f64,
    q: &CircleQuadrature,
) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {radius}")));
    }
    let u = |z: Complex64| -> Result<f64> { Ok(f.log_modulus(z)?.max(0.0)) };
    for &t in q.nodes() {
        let z = center + Complex64::from_polar(radius, t);
        if f.domain.contains(z) == Some(false) {
            return Err(Error::OutsideDomain {
                what: "circle node",
                value: z,
                domain: "the function's domain",
            });
        }
    }
    let mean = try_circle_mean(|t| u(center + Complex64::from_polar(radius, t)), q)?;
    Ok(u(center)? - mean)
}

/// `e^{z^{π/α}}` on `N_α`: bounded by 1 on the boundary, unbounded inside.
pub fn sharpness_function(alpha: f64) -> Result<AnalyticFunctionSpec> {
    let domain = PlDomain::wedge(alpha)?;
    let exponent = PI / alpha;
    Ok(AnalyticFunctionSpec::new(
        format!("exp(z^{exponent})"),
        move |z| principal_pow(z, exponent).exp(),
        domain,
    )
    .with_log_modulus(move |z| principal_pow(z, exponent).re))
}

/// Sample functions with known behaviour on wedges.
pub fn catalog() -> Vec<AnalyticFunctionSpec> {
    let half = PI / 2.0;
    let wedge = |a: f64| PlDomain::wedge(a).expect("valid angle");
    vec![
        sharpness_function(half).expect("valid angle"),
        sharpness_function(PI).expect("valid angle"),
        sharpness_function(1.5 * PI).expect("valid angle"),
        AnalyticFunctionSpec::new("exp(z)", |z: Complex64| z.exp(), wedge(half)).with_log_modulus(|z| z.re),
        AnalyticFunctionSpec::new("1/(1+z)", |z: Complex64| 1.0 / (1.0 + z), wedge(half)),
        AnalyticFunctionSpec::new("z", |z| z, wedge(half)),
        AnalyticFunctionSpec::new("z^2 + 1", |z: Complex64| z * z + 1.0, wedge(PI)),
    ]
}

/// Everything the sharpness demonstration reports for one wedge.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessReport {
    pub alpha: f64,
    pub boundary_sup: f64,
    pub fit: GrowthFit,
    pub verdict: PlVerdict,
    /// `(ln 10⁶)^{α/π}`, where `e^{x^{π/α}}` reaches `10⁶` on the axis.
    pub axis_radius: f64,
    pub axis_value: f64,
}

/// Boundary sup, growth fit on the axis and verdict for `e^{z^{π/α}}` on `N_α`.
pub fn sharpness_check(alpha: f64, samples: usize, radius_cap: f64) -> Result<SharpnessReport> {
    let f = sharpness_function(alpha)?;
    let boundary = boundary_sup(&f, samples, radius_cap)?;
    let axis_radius = 1e6f64.ln().powf(alpha / PI);
    let radii = geometric_radii(1.5, 2.0 * axis_radius.max(2.0), 40)?;
    let fit = growth_fit(&f, 0.0, &radii)?;
    let config = VerdictConfig {
        interior_radius: 2.0 * axis_radius,
        ..VerdictConfig::default()
    };
    let verdict = pl_verdict(&f, boundary, &fit, f.domain.p_star()?, 0.0, &config)?;
    let axis_value = f.log_modulus(Complex64::new(axis_radius, 0.0))?.exp();
    Ok(SharpnessReport {
        alpha,
        boundary_sup: boundary,
        fit,
        verdict,
        axis_radius,
        axis_value,
    })
}
