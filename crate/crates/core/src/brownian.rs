//! Monte Carlo occupation times of planar Brownian motion killed on leaving
//! the unit disk.
//!
//! Paths use the Euler scheme with `N(0, dt)` increments per coordinate
//! (generator `½Δ`) and stop at the first step with `|B| ≥ 1`. Path `i` draws
//! from its own ChaCha8 stream `(seed, i)`, and per-path results are reduced
//! in path order, so estimates are bit-reproducible at any thread count.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::complex::DiskPoint;
use crate::error::{Error, Result};
use crate::greens::greens_disk_closed_raw;
use crate::quadrature::{gauss_legendre, pairwise_sum};

pub const MAX_STEP_SIZE: f64 = 1e-3;
pub const MIN_PATH_COUNT: usize = 1000;
pub const DEFAULT_STEP_CAP: u64 = 100_000_000;

/// Discretisation and sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCConfig {
    pub path_count: usize,
    pub step_size: f64,
    pub seed: u64,
    pub start: DiskPoint,
    /// Steps after which a single path is abandoned.
    pub step_cap: u64,
}

impl MCConfig {
    pub fn new(path_count: usize, step_size: f64, seed: u64, start: DiskPoint) -> Result<Self> {
        if path_count < MIN_PATH_COUNT {
            return Err(Error::invalid(format!(
                "need at least {MIN_PATH_COUNT} paths, got {path_count}"
            )));
        }
        if !(step_size > 0.0 && step_size <= MAX_STEP_SIZE) {
            return Err(Error::invalid(format!(
                "step size must lie in (0, {MAX_STEP_SIZE}], got {step_size}"
            )));
        }
        Ok(MCConfig {
            path_count,
            step_size,
            seed,
            start,
            step_cap: DEFAULT_STEP_CAP,
        })
    }

    pub fn with_step_cap(mut self, step_cap: u64) -> Self {
        self.step_cap = step_cap;
        self
    }

    pub fn with_start(mut self, start: DiskPoint) -> Self {
        self.start = start;
        self
    }
}

type Functional = dyn Fn(Complex64) -> f64 + Send + Sync;

/// A named bounded function on the disk.
#[derive(Clone)]
pub struct TestFunction {
    pub name: String,
    f: Arc<Functional>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl TestFunction {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        TestFunction {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        (self.f)(z)
    }

    /// `factor · f`.
    pub fn scaled(&self, factor: f64) -> Self {
        let inner = Arc::clone(&self.f);
        TestFunction {
            name: format!("{factor}*{}", self.name),
            f: Arc::new(move |z| factor * inner(z)),
        }
    }

    pub fn unit() -> Self {
        TestFunction::new("unit", |_| 1.0)
    }

    pub fn zero() -> Self {
        TestFunction::new("zero", |_| 0.0)
    }

    /// Indicator of `|z| < radius`.
    pub fn disk_indicator(radius: f64) -> Self {
        TestFunction::new(format!("indicator(|z|<{radius})"), move |z: Complex64| {
            if z.norm_sqr() < radius * radius {
                1.0
            } else {
                0.0
            }
        })
    }
}

/// Smooth, linearly independent test functions for [`greens_constant_fit`].
pub fn default_test_functions() -> Vec<TestFunction> {
    vec![
        TestFunction::unit(),
        TestFunction::new("|z|^2", |z: Complex64| z.norm_sqr()),
        TestFunction::new("1+Re z", |z: Complex64| 1.0 + z.re),
        TestFunction::new("exp(-2|z|^2)", |z: Complex64| (-2.0 * z.norm_sqr()).exp()),
    ]
}

/// Outcome of one simulated path.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitPath {
    pub exit_time: f64,
    pub steps: u64,
    /// `Σ f(B_{k·dt})·dt` over the steps before exit, one entry per functional.
    pub occupations: Vec<f64>,
    pub exit_point: Complex64,
}

/// The RNG for path `path_index`.
fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

/// Run path `path_index` to its exit, accumulating every functional.
pub fn simulate_exit_path(config: &MCConfig, path_index: u64, functions: &[TestFunction]) -> Result<ExitPath> {
    let mut rng = path_rng(config.seed, path_index);
    let sigma = config.step_size.sqrt();
    let mut b = config.start.value();
    let mut sums = vec![0.0; functions.len()];
    let mut steps: u64 = 0;
    while b.norm_sqr() < 1.0 {
        if steps >= config.step_cap {
            return Err(Error::StepCapExceeded {
                path_index,
                cap: config.step_cap,
                completed_paths: 0,
                partial_mean: f64::NAN,
            });
        }
        for (s, f) in sums.iter_mut().zip(functions) {
            *s += f.eval(b);
        }
        let dx: f64 = rng.sample(StandardNormal);
        let dy: f64 = rng.sample(StandardNormal);
        b += Complex64::new(sigma * dx, sigma * dy);
        steps += 1;
    }
    Ok(ExitPath {
        exit_time: steps as f64 * config.step_size,
        steps,
        occupations: sums.into_iter().map(|s| s * config.step_size).collect(),
        exit_point: b,
    })
}

/// Monte Carlo estimate of `E_a ∫₀^τ f(B_s) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationEstimate {
    pub name: String,
    pub mean: f64,
    /// Sample standard deviation over `√path_count`.
    pub stderr: f64,
    pub path_count: usize,
    pub step_size: f64,
    pub seed: u64,
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let squares: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let variance = pairwise_sum(&squares) / (n - 1.0);
    (mean, (variance / n).sqrt())
}

/// Estimates for several functionals from one shared set of paths.
pub fn occupation_estimates(config: &MCConfig, functions: &[TestFunction]) -> Result<Vec<OccupationEstimate>> {
    let outcomes: Vec<Result<ExitPath>> = (0..config.path_count as u64)
        .into_par_iter()
        .map(|i| simulate_exit_path(config, i, functions))
        .collect();
    if let Some(failed) = outcomes.iter().position(|o| o.is_err()) {
        let completed: Vec<f64> = outcomes
            .iter()
            .filter_map(|o| o.as_ref().ok())
            .map(|p| p.occupations.first().copied().unwrap_or(p.exit_time))
            .collect();
        let partial_mean = if completed.is_empty() {
            f64::NAN
        } else {
            pairwise_sum(&completed) / completed.len() as f64
        };
        return Err(Error::StepCapExceeded {
            path_index: failed as u64,
            cap: config.step_cap,
            completed_paths: completed.len(),
            partial_mean,
        });
    }
    let paths: Vec<ExitPath> = outcomes.into_iter().map(|o| o.expect("checked above")).collect();
    Ok(functions
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let values: Vec<f64> = paths.iter().map(|p| p.occupations[j]).collect();
            let (mean, stderr) = mean_and_stderr(&values);
            OccupationEstimate {
                name: f.name.clone(),
                mean,
                stderr,
                path_count: config.path_count,
                step_size: config.step_size,
                seed: config.seed,
            }
        })
        .collect())
}

pub fn occupation_estimate(config: &MCConfig, f: &TestFunction) -> Result<OccupationEstimate> {
    Ok(occupation_estimates(config, std::slice::from_ref(f))?.remove(0))
}

/// Polar quadrature about `start` for `∫_𝔻 G_𝔻(start, z) f(z) dA(z)`.
///
/// Rays `z = a + ρe^{iφ}` run to the unit circle; the radial substitution
/// `ρ = R(φ)t²` removes the logarithmic singularity before Gauss–Legendre in
/// `t`, and the trapezoid rule handles the periodic angle.
pub fn greens_area_integral(start: DiskPoint, f: &TestFunction, angle_nodes: usize, radial_nodes: usize) -> f64 {
    let a = start.value();
    let (t_nodes, t_weights) = gauss_legendre(radial_nodes);
    let dphi = 2.0 * PI / angle_nodes as f64;
    let per_angle: Vec<f64> = (0..angle_nodes)
        .map(|j| {
            let e = Complex64::from_polar(1.0, dphi * j as f64);
            let proj = (a.conj() * e).re;
            let reach = -proj + (proj * proj + 1.0 - a.norm_sqr()).sqrt();
            let radial: Vec<f64> = t_nodes
                .iter()
                .zip(&t_weights)
                .map(|(&x, &w)| {
                    // Gauss–Legendre nodes on [−1, 1] mapped to t ∈ [0, 1].
                    let t = 0.5 * (x + 1.0);
                    let rho = reach * t * t;
                    let z = a + rho * e;
                    let g = greens_disk_closed_raw(a, z).unwrap_or(0.0);
                    0.5 * w * g * f.eval(z) * rho * 2.0 * reach * t
                })
                .collect();
            pairwise_sum(&radial)
        })
        .collect();
    pairwise_sum(&per_angle) * dphi
}

const FIT_ANGLE_NODES: usize = 256;
const FIT_RADIAL_NODES: usize = 64;
/// Normalised Gram determinants below this flag nearly dependent test functions.
const GRAM_WARNING: f64 = 1e-6;

/// Least-squares `κ` in `E_a ∫₀^τ f(B_s) ds ≈ κ ∫ G_𝔻(a, z) f(z) dA(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaFit {
    pub kappa: f64,
    pub estimates: Vec<OccupationEstimate>,
    pub area_integrals: Vec<f64>,
    /// Determinant of the unit-diagonal Gram matrix of the test functions.
    pub gram_determinant: f64,
    pub ill_conditioned: bool,
}

fn normalised_gram_determinant(functions: &[TestFunction], start: DiskPoint) -> f64 {
    // L² inner products over the disk by the same polar rule with G replaced by 1.
    let (t_nodes, t_weights) = gauss_legendre(FIT_RADIAL_NODES);
    let a = start.value();
    let dphi = 2.0 * PI / FIT_ANGLE_NODES as f64;
    let m = functions.len();
    let mut gram = vec![vec![0.0; m]; m];
    for j in 0..FIT_ANGLE_NODES {
        let e = Complex64::from_polar(1.0, dphi * j as f64);
        let proj = (a.conj() * e).re;
        let reach = -proj + (proj * proj + 1.0 - a.norm_sqr()).sqrt();
        for (&x, &w) in t_nodes.iter().zip(&t_weights) {
            let t = 0.5 * (x + 1.0);
            let rho = reach * t;
            let z = a + rho * e;
            let weight = 0.5 * w * rho * reach * dphi;
            let values: Vec<f64> = functions.iter().map(|f| f.eval(z)).collect();
            for p in 0..m {
                for q in 0..m {
                    gram[p][q] += weight * values[p] * values[q];
                }
            }
        }
    }
    let diag: Vec<f64> = (0..m).map(|i| gram[i][i].sqrt()).collect();
    for p in 0..m {
        for q in 0..m {
            gram[p][q] /= diag[p] * diag[q];
        }
    }
    determinant(gram)
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("non-empty range");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower.iter_mut() {
            let factor = row[col] / pivot_row[col];
            for (x, p) in row[col..n].iter_mut().zip(&pivot_row[col..n]) {
                *x -= factor * p;
            }
        }
    }
    det
}

/// Fit the constant linking occupation times to `G_𝔻`; `1/π` is expected
/// for the `½Δ` generator.
pub fn greens_constant_fit(config: &MCConfig, test_functions: &[TestFunction]) -> Result<KappaFit> {
    if test_functions.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 test functions, got {}",
            test_functions.len()
        )));
    }
    let gram_determinant = normalised_gram_determinant(test_functions, config.start);
    if !(gram_determinant > 0.0) {
        return Err(Error::Singular("test functions are linearly dependent".into()));
    }
    let estimates = occupation_estimates(config, test_functions)?;
    let area_integrals: Vec<f64> = test_functions
        .iter()
        .map(|f| greens_area_integral(config.start, f, FIT_ANGLE_NODES, FIT_RADIAL_NODES))
        .collect();
    let num: f64 = estimates.iter().zip(&area_integrals).map(|(e, i)| e.mean * i).sum();
    let den: f64 = area_integrals.iter().map(|i| i * i).sum();
    if den == 0.0 {
        return Err(Error::Singular("all area integrals vanish".into()));
    }
    Ok(KappaFit {
        kappa: num / den,
        estimates,
        area_integrals,
        gram_determinant,
        ill_conditioned: gram_determinant < GRAM_WARNING,
    })
}
