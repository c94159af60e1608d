//! Circle averages and the quadrature rules behind them.
//!
//! [`CircleQuadrature`] is the equal-weight periodic trapezoidal rule; it is
//! spectrally accurate for smooth periodic integrands. [`GradedCircleRule`]
//! splits the circle at known near-singular angles and applies a tanh-sinh
//! rule on each arc, for integrands such as `|φ(re^{iθ})|^p` with `r → 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complex::ComplexPoint;
use crate::error::{Error, Result};

pub const DEFAULT_NODE_COUNT: usize = 1024;
pub const MIN_NODE_COUNT: usize = 16;

/// Equally spaced nodes `θ_j = offset + 2πj/n` on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleQuadrature {
    nodes: Vec<f64>,
}

impl CircleQuadrature {
    pub fn new(node_count: usize) -> Result<Self> {
        Self::with_offset(node_count, 0.0)
    }

    /// Nodes rotated by `offset` radians (reduced into `[0, 2π)`).
    pub fn with_offset(node_count: usize, offset: f64) -> Result<Self> {
        if node_count < MIN_NODE_COUNT {
            return Err(Error::invalid(format!(
                "circle quadrature needs at least {MIN_NODE_COUNT} nodes, got {node_count}"
            )));
        }
        if !offset.is_finite() {
            return Err(Error::NonFinite {
                what: "quadrature offset",
            });
        }
        let step = 2.0 * PI / node_count as f64;
        let nodes = (0..node_count)
            .map(|j| (offset + step * j as f64).rem_euclid(2.0 * PI))
            .collect();
        Ok(CircleQuadrature { nodes })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

impl Default for CircleQuadrature {
    fn default() -> Self {
        CircleQuadrature::new(DEFAULT_NODE_COUNT).expect("default node count is valid")
    }
}

/// Equal-weight average of `f` over the nodes of `q`.
pub fn circle_mean<F>(f: F, q: &CircleQuadrature) -> f64
where
    F: Fn(f64) -> f64,
{
    let values: Vec<f64> = q.nodes.iter().map(|&t| f(t)).collect();
    pairwise_sum(&values) / q.node_count() as f64
}

/// [`circle_mean`] for integrands that can fail; the first failure wins.
pub fn try_circle_mean<F>(f: F, q: &CircleQuadrature) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let values = q.nodes.iter().map(|&t| f(t)).collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&values) / q.node_count() as f64)
}

/// `|h(c) − mean of h over the circle |z − c| = radius|`.
///
/// Zero (to quadrature accuracy) exactly when `h` satisfies the mean-value
/// property on that circle.
pub fn mean_value_residual<H>(h: H, center: ComplexPoint, radius: f64, q: &CircleQuadrature) -> Result<f64>
where
    H: Fn(Complex64) -> Result<f64>,
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("circle radius must be positive, got {radius}")));
    }
    let c = center.value();
    let at_center = h(c)?;
    let mean = try_circle_mean(|t| h(c + Complex64::from_polar(radius, t)), q)?;
    Ok((at_center - mean).abs())
}

/// Sum in a fixed pairwise order: the result depends only on the slice
/// contents, never on thread scheduling.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Circle rule graded towards a set of near-singular angles.
///
/// Each arc between consecutive singular angles gets its own tanh-sinh rule,
/// so nodes cluster double-exponentially at the arc ends. Weights sum to one,
/// making [`GradedCircleRule::mean`] an approximation of `(1/2π)∫f dθ`.
/// With no singular angles this is the plain trapezoidal rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedCircleRule {
    angles: Vec<f64>,
    weights: Vec<f64>,
}

const TANH_SINH_SPAN: f64 = 3.5;

impl GradedCircleRule {
    pub fn new(singular_angles: &[f64], nodes_per_arc: usize) -> Result<Self> {
        if nodes_per_arc < MIN_NODE_COUNT {
            return Err(Error::invalid(format!(
                "graded rule needs at least {MIN_NODE_COUNT} nodes per arc, got {nodes_per_arc}"
            )));
        }
        if singular_angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite { what: "singular angle" });
        }
        if singular_angles.is_empty() {
            let q = CircleQuadrature::new(nodes_per_arc)?;
            let w = 1.0 / nodes_per_arc as f64;
            return Ok(GradedCircleRule {
                weights: vec![w; nodes_per_arc],
                angles: q.nodes,
            });
        }

        let mut cuts: Vec<f64> = singular_angles.iter().map(|a| a.rem_euclid(2.0 * PI)).collect();
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

        let (unit_offsets, unit_weights) = tanh_sinh_unit(nodes_per_arc);
        let mut angles = Vec::with_capacity(cuts.len() * nodes_per_arc);
        let mut weights = Vec::with_capacity(cuts.len() * nodes_per_arc);
        for (i, &start) in cuts.iter().enumerate() {
            let end = if i + 1 < cuts.len() {
                cuts[i + 1]
            } else {
                cuts[0] + 2.0 * PI
            };
            let length = end - start;
            if length <= 0.0 {
                continue;
            }
            // The closing arc ends at cuts[0] + 2π; angles near it are written
            // as cuts[0] − offset so tiny offsets survive rounding.
            let end_anchor = if i + 1 < cuts.len() { end } else { cuts[0] };
            for (&(from_start, from_end), &w) in unit_offsets.iter().zip(&unit_weights) {
                let theta = if from_start <= from_end {
                    start + length * from_start
                } else {
                    end_anchor - length * from_end
                };
                angles.push(theta);
                weights.push(w * length / (2.0 * PI));
            }
        }
        Ok(GradedCircleRule { angles, weights })
    }

    pub fn node_count(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted average of `f` over the rule.
    pub fn mean<F>(&self, f: F) -> f64
    where
        F: Fn(f64) -> f64,
    {
        let terms: Vec<f64> = self.angles.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).collect();
        pairwise_sum(&terms)
    }
}

/// Tanh-sinh nodes on `[0, 1]` as `(distance from 0, distance from 1)` pairs
/// plus weights summing to (approximately) one.
fn tanh_sinh_unit(n: usize) -> (Vec<(f64, f64)>, Vec<f64>) {
    let h = 2.0 * TANH_SINH_SPAN / (n - 1) as f64;
    let mut offsets = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 0..n {
        let t = -TANH_SINH_SPAN + h * j as f64;
        let y = 0.5 * PI * t.sinh();
        // q = e^{-2|y|}; distance of x = tanh(y) ∈ [-1, 1] from the nearer end is 2q/(1+q).
        let q = (-2.0 * y.abs()).exp();
        let near = q / (1.0 + q);
        let far = 1.0 - near;
        let pair = if y >= 0.0 { (far, near) } else { (near, far) };
        offsets.push(pair);
        // dx/dt = (π/2) cosh t · sech² y, mapped from [-1, 1] to [0, 1].
        let sech2 = 4.0 * q / ((1.0 + q) * (1.0 + q));
        weights.push(0.5 * h * 0.5 * PI * t.cosh() * sech2);
    }
    (offsets, weights)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}
