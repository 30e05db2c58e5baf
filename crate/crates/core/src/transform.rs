//! The Poisson transform of K-finite boundary data: spectral evaluation,
//! the quadrature oracle, L^p norms, the Hardy growth norm, the sandwich
//! inequality and the inversion approximant.
//!
//! Boundary functions here are combinations of zonal harmonics, so every
//! boundary integral reduces to the `(r', theta)` grid with `r' = cos(xi)`,
//! `theta = phi`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::harmonics::{zonal_from_cosines, zonal_harmonic, BoundaryPoint, KTypeIndex};
use crate::kernel::{real_pow, zonal_kernel, SpectralParams};
use crate::quadrature::{gauss_legendre_on, pairwise_sum, zonal_integral, ZonalGrid, ZonalNode};
use crate::special::gegenbauer_c1;
use crate::spherical::{c_constant, delta_constant, generalized_spherical};
use crate::Complex;

/// Finite sum `sum_k c_k phi_{p_k, q_k}` of zonal harmonics.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct KFiniteFunction {
    terms: Vec<(KTypeIndex, Complex)>,
}

impl KFiniteFunction {
    pub fn new(terms: Vec<(KTypeIndex, Complex)>) -> Result<Self> {
        for (i, (k, _)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(j, _)| j == k) {
                return Err(domain(format!("K-type {k} appears twice")));
            }
        }
        Ok(KFiniteFunction { terms })
    }

    pub fn zero() -> Self {
        KFiniteFunction::default()
    }

    pub fn single(kt: KTypeIndex, coeff: Complex) -> Self {
        KFiniteFunction { terms: vec![(kt, coeff)] }
    }

    pub fn terms(&self) -> &[(KTypeIndex, Complex)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.norm() == 0.0)
    }

    pub fn scale(&self, factor: Complex) -> Self {
        KFiniteFunction {
            terms: self.terms.iter().map(|&(k, c)| (k, c * factor)).collect(),
        }
    }

    /// Coefficientwise `self - other`.
    pub fn sub(&self, other: &KFiniteFunction) -> Self {
        let mut terms = self.terms.clone();
        for &(k, c) in &other.terms {
            match terms.iter_mut().find(|(j, _)| *j == k) {
                Some(slot) => slot.1 -= c,
                None => terms.push((k, -c)),
            }
        }
        KFiniteFunction { terms }
    }

    /// Value at the boundary point with the given `cos(xi)` and `cos(phi)`.
    pub fn eval_cosines(&self, n: u32, cos_xi: f64, cos_phi: f64) -> Complex {
        self.terms
            .iter()
            .map(|&(k, c)| c * zonal_from_cosines(k, n, cos_xi, cos_phi))
            .sum()
    }

    pub fn eval(&self, n: u32, pt: &BoundaryPoint) -> Result<Complex> {
        let mut acc = Complex::new(0.0, 0.0);
        for &(k, c) in &self.terms {
            acc += c * zonal_harmonic(k, n, pt)?;
        }
        Ok(acc)
    }
}

/// `sum_k c_k Phi_{lambda,l,p_k,q_k}(r) phi_{p_k,q_k}(pt)`.
pub fn poisson_spectral(params: &SpectralParams, f: &KFiniteFunction, r: f64, pt: &BoundaryPoint) -> Result<Complex> {
    let mut acc = Complex::new(0.0, 0.0);
    for &(k, c) in f.terms() {
        acc += c * generalized_spherical(params, k, r)? * zonal_harmonic(k, params.n, pt)?;
    }
    Ok(acc)
}

fn check_grid(params: &SpectralParams, grid: &ZonalGrid) -> Result<()> {
    if grid.n() != params.n {
        return Err(domain(format!("grid built for n = {}, parameters have n = {}", grid.n(), params.n)));
    }
    Ok(())
}

/// Poisson transform at `r e_1` by quadrature of the kernel against a zonal
/// boundary function given on grid nodes (`node.r = cos(xi)`, `node.theta = phi`).
pub fn poisson_quadrature<F>(params: &SpectralParams, f_zonal: F, r: f64, grid: &ZonalGrid) -> Result<Complex>
where
    F: Fn(&ZonalNode) -> Complex + Sync,
{
    check_grid(params, grid)?;
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("radius r = {r} outside [0, 1)")));
    }
    zonal_integral(|nd| zonal_kernel(params, r, nd.r, nd.cos, nd.sin) * f_zonal(nd), grid)
}

/// [`poisson_quadrature`] of a K-finite function.
pub fn poisson_quadrature_kfinite(params: &SpectralParams, f: &KFiniteFunction, r: f64, grid: &ZonalGrid) -> Result<Complex> {
    let n = params.n;
    poisson_quadrature(params, |nd| f.eval_cosines(n, nd.r, nd.cos), r, grid)
}

/// Poisson transform at `r u` with `u = (cos(alpha) + y0 sin(alpha)) e_1`.
///
/// Writing the first boundary coordinate as `r'(cos theta + y sin theta)`,
/// the kernel depends on `y` only through the angle `gamma` between `y` and
/// `y0`, whose density on the sphere of imaginary units is `sin(gamma)/2`.
/// The extra `gamma` integral uses `gamma_nodes` Gauss-Legendre points.
pub fn poisson_quadrature_off_axis<F>(
    params: &SpectralParams,
    f_zonal: F,
    r: f64,
    alpha: f64,
    grid: &ZonalGrid,
    gamma_nodes: usize,
) -> Result<Complex>
where
    F: Fn(&ZonalNode) -> Complex + Sync,
{
    check_grid(params, grid)?;
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("radius r = {r} outside [0, 1)")));
    }
    let (gs, gw) = gauss_legendre_on(gamma_nodes, 0.0, PI)?;
    let cos_gamma: Vec<(f64, f64)> = gs.iter().zip(&gw).map(|(g, w)| (g.cos(), w * g.sin() / 2.0)).collect();
    let (sa, ca) = alpha.sin_cos();
    zonal_integral(
        |nd| {
            let parts: Vec<Complex> = cos_gamma
                .iter()
                .map(|&(cg, w)| {
                    let c = (ca * nd.cos + sa * nd.sin * cg).clamp(-1.0, 1.0);
                    zonal_kernel(params, r, nd.r, c, (1.0 - c * c).sqrt()) * w
                })
                .collect();
            pairwise_sum(&parts) * f_zonal(nd)
        },
        grid,
    )
}

/// `(int |g|^p)^(1/p)` over the fitted boundary measure for a zonal `g`.
pub fn lp_norm_zonal<G>(g: G, p_exp: f64, grid: &ZonalGrid) -> Result<f64>
where
    G: Fn(&ZonalNode) -> Complex + Sync,
{
    if !(p_exp >= 1.0) {
        return Err(domain(format!("L^p exponent {p_exp} must be at least 1")));
    }
    let v = zonal_integral(|nd| Complex::new(g(nd).norm().powf(p_exp), 0.0), grid)?;
    Ok(v.re.max(0.0).powf(1.0 / p_exp))
}

pub fn lp_norm(f: &KFiniteFunction, p_exp: f64, grid: &ZonalGrid) -> Result<f64> {
    let n = grid.n();
    lp_norm_zonal(|nd| f.eval_cosines(n, nd.r, nd.cos), p_exp, grid)
}

/// Sup of the scaled `L^p` norms over a radial grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyNormResult {
    pub value: f64,
    pub argmax_r: f64,
    /// `(r, (1-r^2)^{-(2n+1-Re(i lambda))/2} ||F(r .)||_p)`; `r = 1` marks the
    /// boundary value `|C_l(lambda)| ||f||_p` when it was requested.
    pub samples: Vec<(f64, f64)>,
}

/// `(1-r^2)^{-(2n+1-Re(i lambda))/2} ||(P f)(r .)||_p` at one radius.
pub fn scaled_lp_norm(params: &SpectralParams, f: &KFiniteFunction, p_exp: f64, r: f64, grid: &ZonalGrid) -> Result<f64> {
    check_grid(params, grid)?;
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("radius r = {r} outside [0, 1)")));
    }
    let coeffs = f
        .terms()
        .iter()
        .map(|&(k, c)| Ok((k, c * generalized_spherical(params, k, r)?)))
        .collect::<Result<Vec<_>>>()?;
    let image = KFiniteFunction { terms: coeffs };
    let norm = lp_norm(&image, p_exp, grid)?;
    let scale = (1.0 - r * r).powf(-(params.rho() - params.i_lambda().re) / 2.0);
    Ok(scale * norm)
}

/// Hardy growth norm over `r_grid`. With `include_boundary` the sample set
/// also contains `r = 1` with the limiting value `|C_l(lambda)| ||f||_p`.
pub fn hardy_norm(
    params: &SpectralParams,
    f: &KFiniteFunction,
    p_exp: f64,
    r_grid: &[f64],
    grid: &ZonalGrid,
    include_boundary: bool,
) -> Result<HardyNormResult> {
    params.require_positive()?;
    if !(p_exp >= 2.0) {
        return Err(domain(format!("Hardy norm exponent {p_exp} must be at least 2")));
    }
    let mut samples = r_grid
        .par_iter()
        .map(|&r| Ok((r, scaled_lp_norm(params, f, p_exp, r, grid)?)))
        .collect::<Result<Vec<_>>>()?;
    if include_boundary {
        samples.push((1.0, c_constant(params)?.norm() * lp_norm(f, p_exp, grid)?));
    }
    let (argmax_r, value) = samples
        .iter()
        .copied()
        .fold((0.0, 0.0), |best, s| if s.1 > best.1 { s } else { best });
    Ok(HardyNormResult { value, argmax_r, samples })
}

/// Outcome of the two-sided estimate `|C_l| ||f||_p <= ||P f|| <= delta_l ||f||_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichResult {
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub f_norm: f64,
    pub hardy: HardyNormResult,
    pub lower: f64,
    pub upper: f64,
    /// `[hardy / lower, hardy / upper]`.
    pub ratios: Vec<f64>,
    /// Relative gap between the largest interior sample and the boundary value.
    pub interior_gap: f64,
}

/// Relative slack for rounding in the lower bound, which is attained in the limit.
pub const SANDWICH_SLACK: f64 = 1e-12;

pub fn sandwich_check(
    params: &SpectralParams,
    f: &KFiniteFunction,
    p_exp: f64,
    r_grid: &[f64],
    grid: &ZonalGrid,
) -> Result<SandwichResult> {
    let f_norm = lp_norm(f, p_exp, grid)?;
    let hardy = hardy_norm(params, f, p_exp, r_grid, grid, true)?;
    let lower = c_constant(params)?.norm() * f_norm;
    let upper = delta_constant(params)? * f_norm;
    let interior = hardy
        .samples
        .iter()
        .filter(|s| s.0 < 1.0)
        .map(|s| s.1)
        .fold(0.0, f64::max);
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
    Ok(SandwichResult {
        lower_ok: hardy.value >= lower * (1.0 - SANDWICH_SLACK),
        upper_ok: hardy.value <= upper * (1.0 + SANDWICH_SLACK),
        f_norm,
        lower,
        upper,
        ratios: vec![ratio(hardy.value, lower), ratio(hardy.value, upper)],
        interior_gap: ratio((interior - lower).abs(), lower),
        hardy,
    })
}

/// `g_r`: coefficients multiplied by `(1-r^2)^{-(2n+1-Re(i lambda))} |Phi_{lambda,l,p,q}(r)|^2`.
pub fn inversion_approx(params: &SpectralParams, f: &KFiniteFunction, r: f64) -> Result<KFiniteFunction> {
    params.require_positive()?;
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("radius r = {r} outside [0, 1)")));
    }
    let scale = real_pow(1.0 - r * r, Complex::new(-(params.rho() - params.i_lambda().re), 0.0)).re;
    let terms = f
        .terms()
        .iter()
        .map(|&(k, c)| {
            let phi = generalized_spherical(params, k, r)?;
            let factor = scale * phi.norm_sqr();
            if !factor.is_finite() {
                return Err(Error::NonFinite("inversion factor"));
            }
            Ok((k, c * factor))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KFiniteFunction { terms })
}

/// `|| |C_l(lambda)|^{-2} g_r - f ||_2` over the fitted measure.
pub fn inversion_error(params: &SpectralParams, f: &KFiniteFunction, r: f64, grid: &ZonalGrid) -> Result<f64> {
    let g = inversion_approx(params, f, r)?;
    let c2 = c_constant(params)?.norm_sqr();
    let diff = g.scale(Complex::new(1.0 / c2, 0.0)).sub(f);
    lp_norm(&diff, 2.0, grid)
}

/// `C^1_p(cos(alpha)) / (p+1)`, the value of `phi_{p,q}` at `(cos(alpha) + y sin(alpha)) e_1`.
pub fn zonal_on_axis_circle(kt: KTypeIndex, alpha: f64) -> f64 {
    gegenbauer_c1(kt.p(), alpha.cos()) / (kt.p() + 1) as f64
}
