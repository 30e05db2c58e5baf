//! Spectral parameters, the character of Sp(1) and the generalized Poisson
//! kernel.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quaternion::{pairing, HVector, Quaternion};
use crate::special::gegenbauer_c1;
use crate::Complex;

/// Radius slack for the open ball and the unit sphere.
pub const BALL_TOLERANCE: f64 = 1e-12;

/// The triple `(n, l, lambda)`, with `l` stored as `2l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub n: u32,
    pub twice_l: u32,
    pub lambda: Complex,
}

impl SpectralParams {
    pub fn new(n: u32, twice_l: u32, lambda: Complex) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("dimension n = {n} must be at least 2")));
        }
        if !(lambda.re.is_finite() && lambda.im.is_finite()) {
            return Err(Error::NonFinite("spectral parameter"));
        }
        Ok(SpectralParams { n, twice_l, lambda })
    }

    /// Build from the value of `i lambda` rather than `lambda`.
    pub fn with_i_lambda(n: u32, twice_l: u32, i_lambda: Complex) -> Result<Self> {
        SpectralParams::new(n, twice_l, -Complex::i() * i_lambda)
    }

    pub fn i_lambda(&self) -> Complex {
        Complex::i() * self.lambda
    }

    pub fn rho(&self) -> f64 {
        (2 * self.n + 1) as f64
    }

    pub fn l(&self) -> f64 {
        self.twice_l as f64 / 2.0
    }

    /// `s = (i lambda + rho) / 2`.
    pub fn s(&self) -> Complex {
        (self.i_lambda() + self.rho()) / 2.0
    }

    /// Guard for the asymptotic statements, which need `Re(i lambda) > 0`.
    pub fn require_positive(&self) -> Result<()> {
        let re = self.i_lambda().re;
        if re > 0.0 {
            Ok(())
        } else {
            Err(domain(format!("Re(i lambda) = {re} must be positive")))
        }
    }
}

/// Character `chi_l(q/|q|) = C^1_{2l}(Re(q/|q|))`.
pub fn chi_l(twice_l: u32, q: Quaternion) -> Result<f64> {
    Ok(gegenbauer_c1(twice_l, q.cos_angle()?))
}

/// `a^s` for a positive real base.
pub(crate) fn real_pow(base: f64, s: Complex) -> Complex {
    (s * base.ln()).exp()
}

/// Kernel from `|x|^2` and the pairing `<x, omega>` alone.
pub fn kernel_from_pairing(params: &SpectralParams, x_norm_sqr: f64, pair: Quaternion) -> Complex {
    let d = Quaternion::ONE - pair;
    let m2 = d.norm_sqr();
    let base = (1.0 - x_norm_sqr) / m2;
    let cos = (d.w / m2.sqrt()).clamp(-1.0, 1.0);
    real_pow(base, params.s()) * gegenbauer_c1(params.twice_l, cos)
}

/// Kernel at `x = r e_1` and a boundary point whose first coordinate is
/// `r' (cos t + y sin t)`; only `r r'` and `t` matter.
pub fn zonal_kernel(params: &SpectralParams, r: f64, r_prime: f64, cos_t: f64, sin_t: f64) -> Complex {
    let a = 1.0 - r * r_prime * cos_t;
    let b = r * r_prime * sin_t;
    let m2 = a * a + b * b;
    let base = (1.0 - r * r) / m2;
    let cos = (a / m2.sqrt()).clamp(-1.0, 1.0);
    real_pow(base, params.s()) * gegenbauer_c1(params.twice_l, cos)
}

/// The generalized Poisson kernel `P_{lambda,l}(x, omega)`.
pub fn poisson_kernel(params: &SpectralParams, x: &HVector, omega: &HVector) -> Result<Complex> {
    let n = params.n as usize;
    if x.dim() != n || omega.dim() != n {
        return Err(domain(format!("points must lie in H^{n}")));
    }
    let x2 = x.norm_sqr();
    if !(x2.sqrt() < 1.0 - BALL_TOLERANCE) {
        return Err(domain(format!("|x| = {} is not inside the open ball", x2.sqrt())));
    }
    if (omega.norm() - 1.0).abs() >= BALL_TOLERANCE {
        return Err(domain(format!("|omega| = {} is not on the unit sphere", omega.norm())));
    }
    let pair = pairing(x, omega)?;
    Ok(kernel_from_pairing(params, x2, pair))
}
