//! Numerics for the generalized Poisson transform on the quaternionic
//! hyperbolic ball: special functions, kernels, zonal harmonics, quadrature
//! oracles, spherical functions and the transform itself.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extrapolate;
pub mod harmonics;
pub mod kernel;
pub mod quadrature;
pub mod quaternion;
pub mod special;
pub mod spherical;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use harmonics::{BoundaryPoint, KTypeIndex};
pub use kernel::SpectralParams;
pub use quadrature::ZonalGrid;
pub use transform::KFiniteFunction;
pub use quaternion::{HVector, Quaternion};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
