//! Elementary and generalized spherical functions, the asymptotic constants
//! `C_l(lambda)` and `delta_l(lambda)`, and the limit law of the bracket of
//! two contiguous hypergeometric functions.
//!
//! Throughout, `r = tanh t` is the radial variable and `z = r^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::extrapolate::{richardson_with_shift, Extrapolated};
use crate::harmonics::KTypeIndex;
use crate::kernel::{real_pow, SpectralParams};
use crate::special::{complex_gamma, hyp2f1, pochhammer, recip_gamma};
use crate::Complex;

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(domain(format!("radius r = {r} outside [0, 1)")))
    }
}

fn gamma_re(x: f64) -> Result<f64> {
    Ok(complex_gamma(re(x))?.re)
}

/// `Phi_{lambda,l}(r)`, the Poisson transform of the constant function 1 on
/// the axis:
/// `(pi/4)(2l+1) Gamma(2)Gamma(2n-2)/Gamma(2n) (1-r^2)^s 2F1(s+l, s-l-1; 2n; r^2)`.
pub fn elementary_spherical(params: &SpectralParams, r: f64) -> Result<Complex> {
    check_radius(r)?;
    let (n, l, s) = (params.n as f64, params.l(), params.s());
    let constant = PI / 4.0 * (2.0 * l + 1.0) * gamma_re(2.0)? * gamma_re(2.0 * n - 2.0)? / gamma_re(2.0 * n)?;
    let f = hyp2f1(s + l, s - l - 1.0, re(2.0 * n), r * r)?;
    Ok(real_pow(1.0 - r * r, s) * f * constant)
}

/// Power of `r` multiplying the bracket of the generalized spherical function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialExponent {
    /// `r^q`, as produced by both integrals in the derivation.
    #[default]
    Q,
    /// `r^p`, as in the displayed statement.
    P,
}

impl RadialExponent {
    pub fn power(self, kt: KTypeIndex) -> u32 {
        match self {
            RadialExponent::Q => kt.q(),
            RadialExponent::P => kt.p(),
        }
    }
}

/// The pieces of `Phi_{lambda,l,p,q}(r)`:
/// `prefactor (poch1a poch1b f1 - poch2a poch2b f2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSphericalTerms {
    pub prefactor: Complex,
    pub poch1a: Complex,
    pub poch1b: Complex,
    pub poch2a: Complex,
    pub poch2b: Complex,
    pub f1: Complex,
    pub f2: Complex,
    pub radial_exponent: u32,
}

impl GenSphericalTerms {
    pub fn bracket(&self) -> Complex {
        self.poch1a * self.poch1b * self.f1 - self.poch2a * self.poch2b * self.f2
    }

    pub fn value(&self) -> Complex {
        self.prefactor * self.bracket()
    }
}

/// Parameters `(a, b, c, alpha, beta)` of the bracket for a given K-type:
/// `a = s+l`, `b = s-l-1`, `c = q+2n`, `alpha = (p+q)/2+1`, `beta = (q-p)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketParams {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub alpha: u32,
    pub beta: u32,
}

impl BracketParams {
    pub fn for_ktype(params: &SpectralParams, kt: KTypeIndex) -> Self {
        let (s, l) = (params.s(), params.l());
        BracketParams {
            a: s + l,
            b: s - l - 1.0,
            c: re((kt.q() + 2 * params.n) as f64),
            alpha: (kt.p() + kt.q()) / 2 + 1,
            beta: kt.half_gap(),
        }
    }

    /// `a + b + alpha + beta - c - 1`, the blow-up order of the bracket at `z = 1`.
    pub fn order(&self) -> Complex {
        self.a + self.b + (self.alpha + self.beta) as f64 - self.c - 1.0
    }

    /// `(a)_alpha (b)_beta F(a+alpha, b+beta; c; z) - (b)_alpha (a)_beta F(b+alpha, a+beta; c; z)`.
    pub fn bracket(&self, z: f64) -> Result<Complex> {
        let (a, b, c) = (self.a, self.b, self.c);
        let (al, be) = (self.alpha, self.beta);
        let f1 = hyp2f1(a + al as f64, b + be as f64, c, z)?;
        let f2 = hyp2f1(b + al as f64, a + be as f64, c, z)?;
        Ok(pochhammer(a, al) * pochhammer(b, be) * f1 - pochhammer(b, al) * pochhammer(a, be) * f2)
    }

    /// `Gamma(c)/(Gamma(a)Gamma(b)) Gamma(order) (a-b)(alpha-beta)`.
    pub fn limit_closed_form(&self) -> Result<Complex> {
        let order = self.order();
        if !(order.re > 0.0) {
            return Err(domain("the limit law needs Re(a+b+alpha+beta-c-1) > 0"));
        }
        Ok(complex_gamma(self.c)? * recip_gamma(self.a)? * recip_gamma(self.b)? * complex_gamma(order)?
            * (self.a - self.b)
            * (self.alpha as f64 - self.beta as f64))
    }
}

/// Threshold for [`limit_law_check`] to accept an extrapolation.
pub const LIMIT_STABILITY: f64 = 1e-4;

/// Richardson-extrapolated `lim_{z->1} (1-z)^order bracket(z)` along
/// `z_sequence`, next to the closed form.
pub fn limit_law_check(bp: &BracketParams, z_sequence: &[f64]) -> Result<(Complex, Complex)> {
    let closed = bp.limit_closed_form()?;
    let order = bp.order();
    let hs: Vec<f64> = z_sequence.iter().map(|z| 1.0 - z).collect();
    let values = z_sequence
        .iter()
        .zip(&hs)
        .map(|(&z, &h)| Ok(real_pow(h, order) * bp.bracket(z)?))
        .collect::<Result<Vec<_>>>()?;
    let ex = richardson_with_shift(&hs, &values, order)?;
    check_stable(&ex, closed)?;
    Ok((ex.value, closed))
}

fn check_stable(ex: &Extrapolated, scale: Complex) -> Result<()> {
    let spread = (ex.value - ex.coarser).norm() / ex.value.norm().max(scale.norm()).max(1e-300);
    if spread > LIMIT_STABILITY && (ex.value - ex.coarser).norm() > 1e-12 {
        return Err(Error::NoConvergence {
            what: "Richardson extrapolation",
            iterations: 0,
        });
    }
    Ok(())
}

/// `Phi_{lambda,l,p,q}(r)` split into its terms, with the chosen radial power.
pub fn generalized_spherical_terms(
    params: &SpectralParams,
    kt: KTypeIndex,
    r: f64,
    exponent: RadialExponent,
) -> Result<GenSphericalTerms> {
    check_radius(r)?;
    let bp = BracketParams::for_ktype(params, kt);
    let (a, b, c, al, be) = (bp.a, bp.b, bp.c, bp.alpha, bp.beta);
    let n = params.n as f64;
    let e = exponent.power(kt);
    let constant = PI / (4.0 * (kt.p() + 1) as f64) * gamma_re(2.0)? * gamma_re(2.0 * n - 2.0)? / gamma_re(c.re)?;
    let z = r * r;
    Ok(GenSphericalTerms {
        prefactor: real_pow(1.0 - z, params.s()) * r.powi(e as i32) * constant,
        poch1a: pochhammer(a, al),
        poch1b: pochhammer(b, be),
        poch2a: pochhammer(b, al),
        poch2b: pochhammer(a, be),
        f1: hyp2f1(a + al as f64, b + be as f64, c, z)?,
        f2: hyp2f1(b + al as f64, a + be as f64, c, z)?,
        radial_exponent: e,
    })
}

/// `Phi_{lambda,l,p,q}(r)` with the radial power `r^q`.
pub fn generalized_spherical(params: &SpectralParams, kt: KTypeIndex, r: f64) -> Result<Complex> {
    generalized_spherical_terms(params, kt, r, RadialExponent::Q).map(|t| t.value())
}

/// For `l = 0` the bracket collapses by the contiguous relation to
/// `(s-1)_alpha (s-1)_beta (p+1)/(s-1) 2F1(s-1+(q-p)/2, s+(p+q)/2; q+2n; r^2)`.
pub fn collapsed_bracket_l0(params: &SpectralParams, kt: KTypeIndex, r: f64) -> Result<Complex> {
    if params.twice_l != 0 {
        return Err(domain("the single-2F1 form only holds for l = 0"));
    }
    check_radius(r)?;
    let bp = BracketParams::for_ktype(params, kt);
    let sm1 = params.s() - 1.0;
    let f = hyp2f1(sm1 + bp.beta as f64, sm1 + bp.alpha as f64, bp.c, r * r)?;
    Ok(pochhammer(sm1, bp.alpha) * pochhammer(sm1, bp.beta) * (kt.p() + 1) as f64 / sm1 * f)
}

/// `C_l(lambda) = (pi/4)(2l+1) Gamma(2n-2) Gamma(i lambda) / (Gamma(s+l) Gamma(s-l-1))`.
pub fn c_constant(params: &SpectralParams) -> Result<Complex> {
    params.require_positive()?;
    let (n, l, s) = (params.n as f64, params.l(), params.s());
    Ok(PI / 4.0 * (2.0 * l + 1.0) * gamma_re(2.0 * n - 2.0)? * complex_gamma(params.i_lambda())?
        * recip_gamma(s + l)?
        * recip_gamma(s - l - 1.0)?)
}

/// The same constant written with `Gamma(2s - 2n - 1)` in place of `Gamma(i lambda)`.
pub fn c_constant_s_form(params: &SpectralParams) -> Result<Complex> {
    params.require_positive()?;
    let (n, l, s) = (params.n as f64, params.l(), params.s());
    Ok(PI / 4.0 * (2.0 * l + 1.0) * gamma_re(2.0 * n - 2.0)? * complex_gamma(2.0 * s - 2.0 * n - 1.0)?
        * recip_gamma(s + l)?
        * recip_gamma(s - l - 1.0)?)
}

/// `delta_l(lambda) = (pi/4)(2l+1) Gamma(2n) Gamma(x) / (Gamma((2n+1+x)/2 - l - 1) Gamma((2n+1+x)/2 + l))`
/// with `x = Re(i lambda)`.
pub fn delta_constant(params: &SpectralParams) -> Result<f64> {
    params.require_positive()?;
    let (n, l) = (params.n as f64, params.l());
    let x = params.i_lambda().re;
    let half = (2.0 * n + 1.0 + x) / 2.0;
    let v = PI / 4.0 * (2.0 * l + 1.0) * gamma_re(2.0 * n)? * gamma_re(x)? * recip_gamma(re(half - l - 1.0))?.re
        * recip_gamma(re(half + l))?.re;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("delta constant"))
    }
}

/// The parameters with `i lambda` replaced by `Re(i lambda)`.
pub fn real_part_params(params: &SpectralParams) -> Result<SpectralParams> {
    SpectralParams::with_i_lambda(params.n, params.twice_l, re(params.i_lambda().re))
}

/// `(1-r^2)^{-(2n+1-i lambda)/2} Phi_{lambda,l,p,q}(r)`, whose limit at `r = 1`
/// is `C_l(lambda)`.
pub fn scaled_generalized_spherical(params: &SpectralParams, kt: KTypeIndex, r: f64) -> Result<Complex> {
    let phi = generalized_spherical(params, kt, r)?;
    Ok(real_pow(1.0 - r * r, -(params.rho() - params.i_lambda()) / 2.0) * phi)
}

/// Richardson-extrapolated `r -> 1` limit of [`scaled_generalized_spherical`]
/// in the variable `h = 1 - r^2`.
pub fn spherical_limit(params: &SpectralParams, kt: KTypeIndex, radii: &[f64]) -> Result<Extrapolated> {
    params.require_positive()?;
    let hs: Vec<f64> = radii.iter().map(|r| 1.0 - r * r).collect();
    let values = radii
        .iter()
        .map(|&r| scaled_generalized_spherical(params, kt, r))
        .collect::<Result<Vec<_>>>()?;
    richardson_with_shift(&hs, &values, params.i_lambda())
}
