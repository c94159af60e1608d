//! Star-like and spiral-like domains described by a radial boundary function.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::complex::principal_arg;
use crate::error::{Error, Result};

type RadialFn = dyn Fn(f64) -> f64 + Send + Sync;

/// `W = {r e^{iθ} : 0 ≤ r < ρ(θ)}` for a radial function `ρ ≥ 0`.
///
/// `ρ(θ) = +∞` marks rays contained entirely in `W` (unbounded domains such
/// as wedges); `ρ(θ) = 0` marks directions that miss `W`. Angles passed to
/// `ρ` lie in `(−π, π]`.
#[derive(Clone)]
pub struct StarDomainSpec {
    rho: Arc<RadialFn>,
    spiral_order: f64,
    description: String,
}

impl fmt::Debug for StarDomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StarDomainSpec")
            .field("description", &self.description)
            .field("spiral_order", &self.spiral_order)
            .finish_non_exhaustive()
    }
}

impl StarDomainSpec {
    pub fn new<F>(description: impl Into<String>, rho: F, spiral_order: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(spiral_order.abs() < PI / 2.0) {
            return Err(Error::invalid(format!(
                "spiral order must satisfy |σ| < π/2, got {spiral_order}"
            )));
        }
        Ok(StarDomainSpec {
            rho: Arc::new(rho),
            spiral_order,
            description: description.into(),
        })
    }

    /// The wedge `N_α = {r e^{iθ} : |θ| < α/2}`.
    pub fn wedge(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0 * PI) {
            return Err(Error::invalid(format!("wedge angle must lie in (0, 2π], got {alpha}")));
        }
        StarDomainSpec::new(
            format!("wedge of opening {alpha}"),
            move |theta: f64| if theta.abs() < alpha / 2.0 { f64::INFINITY } else { 0.0 },
            0.0,
        )
    }

    pub fn full_plane() -> Self {
        StarDomainSpec::new("whole plane", |_| f64::INFINITY, 0.0).expect("σ = 0 is valid")
    }

    /// Radial function at `theta`, with the angle reduced into `(−π, π]`.
    pub fn rho(&self, theta: f64) -> f64 {
        let t = principal_arg(Complex64::from_polar(1.0, theta));
        (self.rho)(t)
    }

    pub fn spiral_order(&self) -> f64 {
        self.spiral_order
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        r < self.rho(principal_arg(z))
    }
}

/// Grid angles `−π + 2π(j + ½)/grid`, symmetric about the real axis.
fn grid_angles(grid: usize) -> impl Iterator<Item = f64> {
    let step = 2.0 * PI / grid as f64;
    (0..grid).map(move |j| -PI + step * (j as f64 + 0.5))
}

/// Angular measure of the longest arc of `W ∩ {|z| = r}`, on a grid of
/// `grid` cells with wrap-around.
pub fn largest_arc(domain: &StarDomainSpec, r: f64, grid: usize) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("arc radius must be positive, got {r}")));
    }
    if grid < 360 {
        return Err(Error::invalid(format!("arc grid needs at least 360 cells, got {grid}")));
    }
    let inside = grid_angles(grid)
        .map(|t| {
            let rho = domain.rho(t);
            if rho.is_nan() || rho < 0.0 {
                Err(Error::invalid(format!(
                    "radial function must be ≥ 0, got {rho} at θ = {t}"
                )))
            } else {
                Ok(rho > r)
            }
        })
        .collect::<Result<Vec<bool>>>()?;
    let cell = 2.0 * PI / grid as f64;
    Ok(longest_circular_run(&inside) as f64 * cell)
}

fn longest_circular_run(flags: &[bool]) -> usize {
    let n = flags.len();
    let Some(gap) = flags.iter().position(|&f| !f) else {
        return n;
    };
    let (mut best, mut run) = (0, 0);
    for i in 1..=n {
        if flags[(gap + i) % n] {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// `π / (A_W cos²σ)`; `A_W = 0` (a bounded domain) gives `+∞`.
pub fn hansen_threshold_from_arc(a_w: f64, spiral_order: f64) -> Result<f64> {
    if !(0.0..=2.0 * PI + 1e-12).contains(&a_w) {
        return Err(Error::invalid(format!("arc measure must lie in [0, 2π], got {a_w}")));
    }
    if !(spiral_order.abs() < PI / 2.0) {
        return Err(Error::invalid(format!(
            "spiral order must satisfy |σ| < π/2, got {spiral_order}"
        )));
    }
    if a_w == 0.0 {
        return Ok(f64::INFINITY);
    }
    let c = spiral_order.cos();
    Ok(PI / (a_w * c * c))
}

/// Probe radii `r_max · 10^{-k/2}`, `k = 8, …, 0`.
pub fn hansen_probe_radii(r_max: f64) -> Vec<f64> {
    (0..=8).rev().map(|k| r_max * 10f64.powf(-(k as f64) / 2.0)).collect()
}

/// Finiteness threshold for `H^p` of the Riemann map onto a spiral-like domain.
///
/// `A_W` is taken as the largest arc at `r_max`, after checking the arcs at
/// [`hansen_probe_radii`] with [`threshold_from_probes`].
pub fn hansen_threshold(domain: &StarDomainSpec, r_max: f64, grid: usize) -> Result<f64> {
    let probes = hansen_probe_radii(r_max)
        .into_iter()
        .map(|r| Ok((r, largest_arc(domain, r, grid)?)))
        .collect::<Result<Vec<(f64, f64)>>>()?;
    threshold_from_probes(&probes, domain.spiral_order(), 2.0 * 2.0 * PI / grid as f64)
}

/// `π/(A_W cos²σ)` from `(radius, largest arc)` probes sorted by radius.
///
/// For a domain that is spiral-like about 0 the arcs cannot widen as `r`
/// grows; a rise above `tolerance` is reported as a
/// [`Error::MonotonicityViolation`]. The last probe supplies `A_W`.
pub fn threshold_from_probes(probes: &[(f64, f64)], spiral_order: f64, tolerance: f64) -> Result<f64> {
    let Some(&(_, a_w)) = probes.last() else {
        return Err(Error::InsufficientData("no arc probes".into()));
    };
    for pair in probes.windows(2) {
        let ((r_previous, previous), (r_current, current)) = (pair[0], pair[1]);
        if current > previous + tolerance {
            return Err(Error::MonotonicityViolation {
                r_previous,
                previous,
                r_current,
                current,
            });
        }
    }
    hansen_threshold_from_arc(a_w, spiral_order)
}
