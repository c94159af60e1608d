//! Green's functions of the disk and upper half-plane, and the covering-map
//! series that expresses the disk kernel as a sum over the fibre of
//! `w ↦ exp(iw)`.
//!
//! The series is evaluated in the frame where `log a` is real. Writing
//! `s = log z` and `L = ln|a|`, the `±k` terms pair up into
//!
//! ```text
//! ln |1 + (A − B)/(B + 4π²k²)|,   A = (s + L)²,  B = (s − L)²,
//! ```
//!
//! which are summed for `k = 1..=N` next to the `k = 0` term. The omitted
//! tail `k > N` is estimated from the expansion of `ln(1 + A/(4π²k²))`
//! and `ln(1 + B/(4π²k²))` against Euler–Maclaurin values of `Σ_{k>N} k^{-2j}`;
//! [`TruncatedSeriesResult::tail_bound`] bounds what that estimate leaves out.

use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::complex::{principal_log_raw, DiskPoint, PuncturedDiskPoint, UpperHalfPlanePoint};
use crate::error::{Error, Result};
use crate::quadrature::pairwise_sum;

/// Pairs closer than this are reported as singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-15;

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;
const PARALLEL_TERMS: usize = 1 << 15;

/// A symmetric partial sum together with a bound on its distance to the full sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSeriesResult {
    /// Best estimate of the full sum (`partial_sum + tail_correction`).
    pub value: f64,
    /// `N`: indices `k ∈ [−N, N]` were summed.
    pub truncation_index: usize,
    /// Upper bound on `|full sum − value|`, including a rounding allowance.
    pub tail_bound: f64,
    /// The plain symmetric partial sum.
    pub partial_sum: f64,
    /// Analytic estimate of the omitted terms (zero when none is applied).
    pub tail_correction: f64,
}

fn check_distinct(a: Complex64, z: Complex64) -> Result<()> {
    if (a - z).norm() < SINGULARITY_THRESHOLD {
        Err(Error::Singular(format!("z = {z} coincides with the pole a = {a}")))
    } else {
        Ok(())
    }
}

/// `G_𝔻(a, z) = ln|(1 − āz)/(a − z)|`.
///
/// Evaluated as `½ log1p((1 − |a|²)(1 − |z|²)/|a − z|²)`, which is exact
/// algebra and keeps full relative accuracy as `|z| → 1`.
pub fn greens_disk_closed(a: DiskPoint, z: DiskPoint) -> Result<f64> {
    greens_disk_closed_raw(a.value(), z.value())
}

pub(crate) fn greens_disk_closed_raw(a: Complex64, z: Complex64) -> Result<f64> {
    check_distinct(a, z)?;
    let num = (1.0 - a.norm_sqr()) * (1.0 - z.norm_sqr());
    Ok(0.5 * (num / (a - z).norm_sqr()).ln_1p())
}

/// `G_ℍ(u, v) = ln|(v − ū)/(v − u)|`, computed as `½ log1p(4 Im u Im v / |v − u|²)`.
pub fn greens_halfplane(u: UpperHalfPlanePoint, v: UpperHalfPlanePoint) -> Result<f64> {
    greens_halfplane_raw(u.value(), v.value())
}

/// Unchecked-domain variant of [`greens_halfplane`] for callers that build
/// preimages themselves; still rejects coincident points and `Im ≤ 0`.
pub fn greens_halfplane_raw(u: Complex64, v: Complex64) -> Result<f64> {
    if !(u.im > 0.0 && v.im > 0.0) {
        return Err(Error::OutsideDomain {
            what: "half-plane point",
            value: if u.im > 0.0 { v } else { u },
            domain: "the upper half-plane",
        });
    }
    check_distinct(u, v)?;
    Ok(0.5 * (4.0 * u.im * v.im / (v - u).norm_sqr()).ln_1p())
}

/// Symmetric truncation of the covering series for `G_𝔻(a, z)`.
///
/// Both points are rotated by `−Arg a` first, so the result does not depend
/// on where the branch cut of `log` falls.
pub fn greens_disk_series(a: PuncturedDiskPoint, z: PuncturedDiskPoint, n: usize) -> Result<TruncatedSeriesResult> {
    let (a, z) = (a.value(), z.value());
    check_distinct(a, z)?;
    let modulus = a.norm();
    let rotation = a.conj() / modulus;
    let log_z = principal_log_raw(z * rotation)?;
    greens_series_in_log_coordinates(Complex64::new(modulus.ln(), 0.0), log_z, n)
}

/// The same series for arbitrary branches `log_a`, `log_z` of the logarithms.
///
/// The general term `ln|(log z + 2πik + conj(log a))/(log z + 2πik − log a)|`
/// depends on `log_a` only through `L = Re log_a` and the shift
/// `s = log_z − i·Im log_a`, so this reduces to the real-`log a` frame.
/// Changing either branch by `2πi` moves the summation window by one index.
pub fn greens_series_in_log_coordinates(log_a: Complex64, log_z: Complex64, n: usize) -> Result<TruncatedSeriesResult> {
    let l = log_a.re;
    let s = log_z - Complex64::new(0.0, log_a.im);
    if !(l < 0.0 && s.re < 0.0) {
        return Err(Error::invalid(
            "log-coordinates must have negative real parts (points inside the punctured disk)",
        ));
    }
    if n == 0 {
        return Err(Error::TruncationTooSmall { n, required: 1 });
    }
    let denom0 = (s - l).norm_sqr();
    if denom0.sqrt() < SINGULARITY_THRESHOLD {
        return Err(Error::Singular("log z − log a vanishes (z = a)".into()));
    }

    let a_coef = (s + l) * (s + l);
    let b_coef = (s - l) * (s - l);
    let largest = a_coef.norm().max(b_coef.norm());
    // The tail expansion needs |A|, |B| ≤ ½·4π²k² for every omitted k.
    let required = ((2.0 * largest / FOUR_PI_SQ).sqrt().ceil() as usize)
        .saturating_sub(1)
        .max(1);
    if n < required {
        return Err(Error::TruncationTooSmall { n, required });
    }

    let k0 = 0.5 * (4.0 * l * s.re / denom0).ln_1p();
    let terms = paired_terms(s, l, n);
    let mut all = Vec::with_capacity(n + 1);
    all.push(k0);
    all.extend_from_slice(&terms);
    let partial_sum = pairwise_sum(&all);

    let (tail_correction, truncation_error) = log_ratio_tail(a_coef, b_coef, n);
    let magnitude: f64 = all.iter().map(|t| t.abs()).sum::<f64>() + tail_correction.abs();
    let conditioning = (1.0 + s.norm() + l.abs()) / denom0.sqrt();
    let rounding = 32.0 * f64::EPSILON * ((1.0 + (n as f64 + 1.0).log2()) * magnitude + k0.abs() + conditioning);

    Ok(TruncatedSeriesResult {
        value: partial_sum + tail_correction,
        truncation_index: n,
        tail_bound: truncation_error + rounding,
        partial_sum,
        tail_correction,
    })
}

/// The paired terms `ln|((s + L)² + 4π²k²)/((s − L)² + 4π²k²)|` for `k = 1..=n`.
///
/// With `t = 4sL/((s − L)² + 4π²k²)` each term is `½ log1p(2 Re t + |t|²)`.
pub fn paired_terms(s: Complex64, l: f64, n: usize) -> Vec<f64> {
    let numerator = 4.0 * s * l;
    let b_coef = (s - l) * (s - l);
    let term = |k: usize| {
        let kk = k as f64;
        let t = numerator / (b_coef + FOUR_PI_SQ * kk * kk);
        0.5 * (2.0 * t.re + t.norm_sqr()).ln_1p()
    };
    if n >= PARALLEL_TERMS {
        (1..=n).into_par_iter().map(term).collect()
    } else {
        (1..=n).map(term).collect()
    }
}

/// Estimate and error bound for `Σ_{k>N} Re[ln(1 + A/(4π²k²)) − ln(1 + B/(4π²k²))]`.
///
/// Uses `ln(1 + w) = w − w²/2 + w³/3 − …` through third order; the remainder
/// is at most `|w|⁴/(4(1 − |w|))` per term. Caller guarantees `|w| ≤ ½`.
fn log_ratio_tail(a: Complex64, b: Complex64, n: usize) -> (f64, f64) {
    let (z2, e2) = zeta_tail(2.0, n);
    let (z4, e4) = zeta_tail(4.0, n);
    let (z6, e6) = zeta_tail(6.0, n);
    let (z8, e8) = zeta_tail(8.0, n);

    let wa = a / FOUR_PI_SQ;
    let wb = b / FOUR_PI_SQ;
    let c2 = (wa - wb).re;
    let c4 = -0.5 * (wa * wa - wb * wb).re;
    let c6 = (wa * wa * wa - wb * wb * wb).re / 3.0;
    let estimate = c2 * z2 + c4 * z4 + c6 * z6;

    let nn = (n + 1) as f64;
    let w_max = wa.norm().max(wb.norm()) / (nn * nn);
    let quartic = (wa.norm().powi(4) + wb.norm().powi(4)) / (4.0 * (1.0 - w_max));
    let error = quartic * (z8 + e8) + c2.abs() * e2 + c4.abs() * e4 + c6.abs() * e6;
    (estimate, error)
}

/// `Σ_{k>n} k^{-p}` by Euler–Maclaurin, with a bound on the truncation error.
pub(crate) fn zeta_tail(p: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let value = nf.powf(1.0 - p) / (p - 1.0) - 0.5 * nf.powf(-p) + p * nf.powf(-p - 1.0) / 12.0
        - p * (p + 1.0) * (p + 2.0) * nf.powf(-p - 3.0) / 720.0;
    let error = p * (p + 1.0) * (p + 2.0) * (p + 3.0) * (p + 4.0) * nf.powf(-p - 5.0) / 30240.0;
    (value, error)
}

type ForwardFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;
type PreimageFn = dyn Fn(Complex64, i64) -> Result<Complex64> + Send + Sync;
type TailFn = dyn Fn(Complex64, Complex64, usize) -> f64 + Send + Sync;

/// Number of sheets of a covering map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheets {
    Finite(usize),
    Infinite,
}

/// A covering map `f: Ω → Ω′` with an enumeration of its fibres.
#[derive(Clone)]
pub struct CoveringMapSpec {
    pub name: String,
    forward: Arc<ForwardFn>,
    preimage: Arc<PreimageFn>,
    sheets: Sheets,
    tail: Option<Arc<TailFn>>,
}

impl std::fmt::Debug for CoveringMapSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoveringMapSpec")
            .field("name", &self.name)
            .field("sheets", &self.sheets)
            .finish_non_exhaustive()
    }
}

impl CoveringMapSpec {
    /// `preimage(target, k)` must return the `k`-th point of `f⁻¹(target)`.
    /// For infinitely many sheets, `tail(b, w, N)` may supply a bound on the
    /// omitted indices `|k| > N`; without one the reported bound is infinite.
    pub fn new<F, P>(name: impl Into<String>, forward: F, preimage: P, sheets: Sheets) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        P: Fn(Complex64, i64) -> Result<Complex64> + Send + Sync + 'static,
    {
        CoveringMapSpec {
            name: name.into(),
            forward: Arc::new(forward),
            preimage: Arc::new(preimage),
            sheets,
            tail: None,
        }
    }

    pub fn with_tail_bound<T>(mut self, tail: T) -> Self
    where
        T: Fn(Complex64, Complex64, usize) -> f64 + Send + Sync + 'static,
    {
        self.tail = Some(Arc::new(tail));
        self
    }

    /// `w ↦ exp(iw)` from the upper half-plane onto the punctured disk, with
    /// fibre `−i·log(target) + 2πk` and the half-plane kernel's tail bound.
    pub fn exp_covering() -> Self {
        CoveringMapSpec::new(
            "exp(i w): upper half-plane -> punctured disk",
            |w| (Complex64::i() * w).exp(),
            |target, k| {
                let log = principal_log_raw(target)?;
                Ok(-Complex64::i() * log + 2.0 * PI * k as f64)
            },
            Sheets::Infinite,
        )
        .with_tail_bound(exp_covering_tail)
    }

    /// The one-sheeted identity cover.
    pub fn identity() -> Self {
        CoveringMapSpec::new("identity", |w| w, |target, _| Ok(target), Sheets::Finite(1))
    }

    pub fn forward(&self, w: Complex64) -> Complex64 {
        (self.forward)(w)
    }

    pub fn preimage(&self, target: Complex64, k: i64) -> Result<Complex64> {
        (self.preimage)(target, k)
    }

    pub fn sheets(&self) -> Sheets {
        self.sheets
    }

    fn indices(&self, n: usize) -> RangeInclusive<i64> {
        match self.sheets {
            Sheets::Finite(count) => 0..=(count.min(2 * n + 1) as i64 - 1),
            Sheets::Infinite => -(n as i64)..=(n as i64),
        }
    }
}

/// Half-plane kernel terms obey `G_ℍ(u, v_k) ≤ 2 Im u Im v / (2π|k| − |d|)²`
/// with `d = Re(v − u)`; both tails together sum to at most
/// `2 Im u Im v / (π(2πN − |d|))`.
fn exp_covering_tail(b: Complex64, w: Complex64, n: usize) -> f64 {
    let d = (w.re - b.re).abs();
    let gap = 2.0 * PI * n as f64 - d;
    if gap <= 0.0 {
        f64::INFINITY
    } else {
        2.0 * b.im * w.im / (PI * gap)
    }
}

/// `G_{Ω′}(f(b), f(w)) ≈ Σ_{w′ ∈ f⁻¹(f(w))} G_Ω(b, w′)` over the enumerated
/// fibre indices (`k ∈ [−N, N]` for infinitely many sheets).
///
/// No tail correction is applied: `value` is the plain fibre sum.
pub fn covering_projection<G>(
    spec: &CoveringMapSpec,
    base_greens: G,
    b: Complex64,
    w: Complex64,
    n: usize,
) -> Result<TruncatedSeriesResult>
where
    G: Fn(Complex64, Complex64) -> Result<f64> + Sync,
{
    if n == 0 {
        return Err(Error::TruncationTooSmall { n, required: 1 });
    }
    let target = spec.forward(w);
    let indices: Vec<i64> = spec.indices(n).collect();
    let terms = indices
        .iter()
        .map(|&k| {
            let preimage = spec.preimage(target, k)?;
            base_greens(b, preimage)
        })
        .collect::<Result<Vec<f64>>>()?;

    let value = pairwise_sum(&terms);
    let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
    let rounding = 16.0 * f64::EPSILON * (1.0 + (terms.len() as f64).log2()) * (1.0 + magnitude);
    let truncation = match (spec.sheets, &spec.tail) {
        (Sheets::Finite(count), _) if count <= terms.len() => 0.0,
        (_, Some(tail)) => tail(b, w, n),
        _ => f64::INFINITY,
    };
    Ok(TruncatedSeriesResult {
        value,
        truncation_index: n,
        tail_bound: truncation + rounding,
        partial_sum: value,
        tail_correction: 0.0,
    })
}

/// Series values at `z = r_j` for radii shrinking to the puncture.
///
/// The values stay bounded and approach `ln(1/|a|)`, the closed form's value
/// at `z = 0`, showing the singularity at the origin is removable.
pub fn removable_singularity_probe(a: PuncturedDiskPoint, radii: &[f64], n: usize) -> Result<Vec<f64>> {
    let limit = a.value().norm() / 2.0;
    for (i, &r) in radii.iter().enumerate() {
        if !(r > 0.0 && r < limit) {
            return Err(Error::invalid(format!(
                "probe radius {r} must lie in (0, |a|/2 = {limit})"
            )));
        }
        if i > 0 && r >= radii[i - 1] {
            return Err(Error::invalid("probe radii must be strictly decreasing"));
        }
    }
    radii
        .iter()
        .map(|&r| {
            let z = PuncturedDiskPoint::new(r, 0.0)?;
            Ok(greens_disk_series(a, z, n)?.value)
        })
        .collect()
}
