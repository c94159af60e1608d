//! Numerical potential theory on the unit disk.

// Negated comparisons are used on purpose: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod brownian;
pub mod complex;
pub mod domain;
pub mod error;
pub mod greens;
pub mod hardy;
pub mod pl;
pub mod products;
pub mod quadrature;

pub use complex::{principal_log, ComplexPoint, DiskPoint, PuncturedDiskPoint, UpperHalfPlanePoint};
pub use domain::StarDomainSpec;
pub use error::{Error, Result};
pub use hardy::ConformalMapSpec;
pub use num_complex::Complex64;
