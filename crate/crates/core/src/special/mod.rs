//! Complex gamma, Pochhammer symbols, the Gauss hypergeometric function and
//! the two orthogonal polynomial families used by the kernels.

mod gamma;
mod hyp2f1;
mod orthopoly;

pub use gamma::{complex_gamma, recip_gamma, POLE_TOLERANCE};
pub use hyp2f1::{
    contiguous_relation_residual, gauss_2f1, hyp2f1, hyp2f1_real_arg, pfaff_transform,
    ContiguousSign, SeriesResult, DEFAULT_TOL, MAX_TERMS,
};
pub use orthopoly::{gegenbauer_c1, jacobi_poly, terminating_2f1_real};

use crate::Complex;

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, by direct product.
pub fn pochhammer(a: Complex, k: u32) -> Complex {
    (0..k).fold(Complex::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}

/// Nearest integer to `z` if `z` lies within `tol` of a nonpositive integer.
pub(crate) fn nonpositive_integer(z: Complex, tol: f64) -> Option<i64> {
    let k = z.re.round();
    if k <= 0.0 && (z.re - k).abs() <= tol && z.im.abs() <= tol {
        Some(k as i64)
    } else {
        None
    }
}
