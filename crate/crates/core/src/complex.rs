//! Validated plane points and branch-aware logarithms.
//!
//! The principal branch used throughout is `log z = ln|z| + i·Arg z` with
//! `Arg z ∈ (−π, π]`. Points are validated at construction so that NaN and
//! infinities never leak into the series and quadrature code.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finite point of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint(Complex64);

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(ComplexPoint(z))
        } else {
            Err(Error::NonFinite { what: "complex point" })
        }
    }

    /// `radius · e^{iθ}`.
    pub fn from_polar(radius: f64, theta: f64) -> Result<Self> {
        Self::from_complex(Complex64::from_polar(radius, theta))
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.0
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! restricted_point {
    ($(#[$meta:meta])* $name:ident, $domain:literal, |$z:ident| $check:expr) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name(ComplexPoint);

        impl $name {
            pub fn new(re: f64, im: f64) -> Result<Self> {
                Self::from_complex(Complex64::new(re, im))
            }

            pub fn from_polar(radius: f64, theta: f64) -> Result<Self> {
                Self::from_complex(Complex64::from_polar(radius, theta))
            }

            pub fn from_complex(z: Complex64) -> Result<Self> {
                let p = ComplexPoint::from_complex(z)?;
                let $z = z;
                if $check {
                    Ok($name(p))
                } else {
                    Err(Error::OutsideDomain {
                        what: stringify!($name),
                        value: z,
                        domain: $domain,
                    })
                }
            }

            pub fn point(self) -> ComplexPoint {
                self.0
            }

            pub fn value(self) -> Complex64 {
                self.0.value()
            }
        }

        impl TryFrom<ComplexPoint> for $name {
            type Error = Error;

            fn try_from(p: ComplexPoint) -> Result<Self> {
                Self::from_complex(p.value())
            }
        }
    };
}

restricted_point!(
    /// A point of the open unit disk.
    DiskPoint,
    "the open unit disk",
    |z| z.norm() < 1.0
);

restricted_point!(
    /// A point of the punctured disk `0 < |z| < 1`.
    PuncturedDiskPoint,
    "the punctured unit disk",
    |z| {
        let r = z.norm();
        r > 0.0 && r < 1.0
    }
);

restricted_point!(
    /// A point of the open upper half-plane.
    UpperHalfPlanePoint,
    "the upper half-plane",
    |z| z.im > 0.0
);

impl From<PuncturedDiskPoint> for DiskPoint {
    fn from(p: PuncturedDiskPoint) -> Self {
        DiskPoint(p.0)
    }
}

/// Principal argument in `(−π, π]`.
///
/// `atan2` returns `−π` for a negative real axis approached from below
/// (`im = −0.0`); that value is folded onto `+π`.
pub fn principal_arg(z: Complex64) -> f64 {
    let arg = z.im.atan2(z.re);
    if arg <= -PI {
        PI
    } else {
        arg
    }
}

/// Principal logarithm `ln|z| + i·Arg z`.
pub fn principal_log(z: ComplexPoint) -> Result<ComplexPoint> {
    let w = principal_log_raw(z.value())?;
    ComplexPoint::from_complex(w)
}

pub(crate) fn principal_log_raw(z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::LogOfZero);
    }
    Ok(Complex64::new(z.re.hypot(z.im).ln(), principal_arg(z)))
}

/// Shift `w` by a multiple of `2πi` so its imaginary part lands in `(−π, π]`.
pub fn normalize_branch(w: Complex64) -> Complex64 {
    let turns = ((w.im - PI) / (2.0 * PI)).ceil();
    let mut im = w.im - 2.0 * PI * turns;
    if im <= -PI {
        im += 2.0 * PI;
    }
    Complex64::new(w.re, im)
}

/// Principal power `z^s = exp(s · log z)`, with `0^s = 0` for `Re s > 0`.
pub fn principal_pow(z: Complex64, exponent: f64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return if exponent > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(f64::INFINITY, 0.0)
        };
    }
    let log = Complex64::new(z.re.hypot(z.im).ln(), principal_arg(z));
    (log * exponent).exp()
}
