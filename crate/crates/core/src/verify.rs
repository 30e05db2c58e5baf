//! The identity-verification suite: every closed form checked against an
//! independent oracle, with a residual and a tolerance per check.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{ktype_enumerate, KTypeIndex};
use crate::kernel::{poisson_kernel, SpectralParams};
use crate::quadrature::{bateman_check, normalize_measure, takahashi_check, ZonalGrid, DEFAULT_GRID_SIZE};
use crate::quaternion::{HVector, KElement};
use crate::special::{
    contiguous_relation_residual, hyp2f1, jacobi_poly, pfaff_transform, terminating_2f1_real, ContiguousSign,
};
use crate::spherical::{
    c_constant, collapsed_bracket_l0, delta_constant, elementary_spherical, generalized_spherical_terms,
    limit_law_check, real_part_params, spherical_limit, BracketParams, RadialExponent,
};
use crate::transform::{
    inversion_error, poisson_quadrature, poisson_quadrature_kfinite, poisson_quadrature_off_axis, sandwich_check,
    scaled_lp_norm, zonal_on_axis_circle, KFiniteFunction,
};
use crate::Complex;

/// Result of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check_name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: Option<f64>,
}

/// Proportionality constant between a quadrature profile and a closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proportionality {
    pub n: u32,
    pub twice_l: u32,
    pub ktype: KTypeIndex,
    pub re: f64,
    pub im: f64,
}

/// Constants and conventions the suite resolved while running.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Fitted {
    pub c_n: Option<f64>,
    pub contiguous_sign: Option<ContiguousSign>,
    pub radial_exponent: Option<RadialExponent>,
    /// Largest profile spread for each candidate exponent, `[r^q, r^p]`.
    pub radial_exponent_spreads: Option<[f64; 2]>,
    pub proportionality: Vec<Proportionality>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub n: u32,
    pub seed: u64,
    pub grid_size: usize,
    pub checks: Vec<CheckOutcome>,
    pub fitted: Fitted,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n: u32,
    pub seed: u64,
    pub grid_size: usize,
    /// Tolerance overrides by check name.
    pub tolerances: BTreeMap<String, f64>,
    /// Record wall-clock times; off by default so reports are reproducible.
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 2,
            seed: 20170919,
            grid_size: DEFAULT_GRID_SIZE,
            tolerances: BTreeMap::new(),
            timings: false,
        }
    }
}

/// Names and default tolerances, in run order.
pub const CHECKS: &[(&str, f64)] = &[
    ("takahashi", 1e-8),
    ("bateman", 1e-8),
    ("contiguous", 1e-10),
    ("rodrigues", 1e-12),
    ("pfaff", 1e-10),
    ("kernel_invariance", 1e-11),
    ("measure", 1e-10),
    ("elementary", 1e-6),
    ("scalarity", 1e-5),
    ("scalarity_points", 1e-6),
    ("limit", 1e-3),
    ("zonal_ratio", 1e-8),
    ("bracket_collapse", 1e-9),
    ("delta_bound", 1e-12),
    ("sandwich", 1e-12),
    ("inversion", 1e-2),
];

pub fn default_tolerance(name: &str) -> Option<f64> {
    CHECKS.iter().find(|(n, _)| *n == name).map(|&(_, t)| t)
}

fn rng_for(seed: u64, name: &str) -> ChaCha8Rng {
    let salt = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

fn random_in_disc<R: Rng>(rng: &mut R, radius: f64) -> Complex {
    Complex::from_polar(radius * rng.random::<f64>().sqrt(), rng.random::<f64>() * std::f64::consts::TAU)
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn kt(p: i64, q: i64) -> KTypeIndex {
    KTypeIndex::new(p, q).expect("valid K-type literal")
}

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// `std / |mean|` of complex samples.
pub fn relative_spread(values: &[Complex]) -> f64 {
    let m = values.iter().sum::<Complex>() / values.len() as f64;
    let var = values.iter().map(|v| (v - m).norm_sqr()).sum::<f64>() / values.len() as f64;
    var.sqrt() / m.norm().max(1e-300)
}

/// Radii `0.1, 0.2, ..., 0.9`.
pub fn profile_radii() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

/// Radii of the extrapolations towards the boundary.
pub const LIMIT_RADII: [f64; 3] = [0.9, 0.99, 0.999];

/// Takahashi's lemma for 20 random `(alpha, beta)` in the disc of radius 4,
/// at `eta` in `{0.1, 0.5, 0.9}`.
pub fn check_takahashi(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed, "takahashi");
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (a, b) = (random_in_disc(&mut rng, 4.0), random_in_disc(&mut rng, 4.0));
        for eta in [0.1, 0.5, 0.9] {
            let (lhs, rhs) = takahashi_check(a, b, eta)?;
            worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
        }
    }
    Ok(worst)
}

/// Bateman's integral for 20 random parameter sets with `Re c > Re s > 0`.
pub fn check_bateman(seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed, "bateman");
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = random_in_disc(&mut rng, 2.0);
        let b = random_in_disc(&mut rng, 2.0);
        let cc = c(1.0 + 4.0 * rng.random::<f64>(), rng.random_range(-1.0..1.0));
        let sp = c(cc.re * rng.random_range(0.1..0.9), rng.random_range(-1.0..1.0));
        let z = 0.9 * rng.random::<f64>();
        let (lhs, rhs) = bateman_check(a, b, cc, sp, z)?;
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
    }
    Ok(worst)
}

/// Contiguous relation for 50 random parameter sets at `z` in `{0.2, 0.6, 0.9}`,
/// for both signs. Returns the worst residual of each sign.
pub fn check_contiguous(seed: u64) -> Result<(f64, f64)> {
    let mut rng = rng_for(seed, "contiguous");
    let (mut printed, mut classical) = (f64::INFINITY, 0.0_f64);
    for _ in 0..50 {
        let a = random_in_disc(&mut rng, 3.0);
        let mut b = random_in_disc(&mut rng, 3.0);
        if (a - b).norm() < 0.1 {
            b += 0.5;
        }
        let cc = c(rng.random_range(0.5..6.0), rng.random_range(-1.0..1.0));
        for z in [0.2, 0.6, 0.9] {
            classical = classical.max(contiguous_relation_residual(a, b, cc, z, ContiguousSign::Classical)?);
            printed = printed.min(contiguous_relation_residual(a, b, cc, z, ContiguousSign::AsPrinted)?);
        }
    }
    Ok((printed, classical))
}

/// Rodrigues formula with exact differentiation of the monomial expansion of
/// `(1-x)^(N+alpha) (1+x)^(N+beta)`, integer `alpha`, `beta`.
pub fn rodrigues_jacobi(degree: u32, alpha: u32, beta: u32, x: f64) -> f64 {
    let binom = |top: usize, k: usize| (1..=k).fold(1.0, |acc, j| acc * (top + j - k) as f64 / j as f64);
    let (p1, p2) = ((degree + alpha) as usize, (degree + beta) as usize);
    let mut coef = vec![0.0_f64; p1 + p2 + 1];
    for i in 0..=p1 {
        let ci = binom(p1, i) * if i % 2 == 0 { 1.0 } else { -1.0 };
        for j in 0..=p2 {
            coef[i + j] += ci * binom(p2, j);
        }
    }
    for _ in 0..degree {
        coef = coef.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect();
    }
    let deriv = coef.iter().rev().fold(0.0, |acc, v| acc * x + v);
    let fact: f64 = (1..=degree).map(|j| j as f64).product();
    let sign = if degree.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * deriv / (2f64.powi(degree as i32) * fact * (1.0 - x).powi(alpha as i32) * (1.0 + x).powi(beta as i32))
}

/// Jacobi recurrence against the Rodrigues formula, and against the
/// terminating 2F1 form `binom(N+alpha, N) 2F1(-N, N+alpha+beta+1; alpha+1; (1-x)/2)`.
pub fn check_rodrigues() -> f64 {
    let mut worst: f64 = 0.0;
    for &(deg, a, b) in &[(2, 1, 3), (3, 1, 3), (5, 0, 2), (4, 3, 1), (6, 1, 3)] {
        for k in 0..=8 {
            let x = -0.8 + 0.2 * k as f64;
            let rec = jacobi_poly(deg, a as f64, b as f64, x);
            let rod = rodrigues_jacobi(deg, a, b, x);
            let binom = (1..=deg).fold(1.0, |acc, j| acc * (a as f64 + j as f64) / j as f64);
            let series = binom * terminating_2f1_real(deg, (deg + a + b + 1) as f64, (a + 1) as f64, (1.0 - x) / 2.0);
            let scale = rec.abs().max(1.0);
            worst = worst.max((rec - rod).abs() / scale).max((rec - series).abs() / scale);
        }
    }
    worst
}

/// The Pfaff identity, on a fixed instance and on random parameters.
pub fn check_pfaff(seed: u64) -> Result<f64> {
    let (p, q, n, r) = (1.0, 3.0, 2.0, 0.7_f64);
    let lhs = hyp2f1(c((p - q) / 2.0, 0.0), c(-(p + q + 2.0) / 2.0, 0.0), c(2.0 * n - 2.0, 0.0), (r * r - 1.0) / (r * r));
    // lhs argument is negative, so go through the real-argument evaluator
    let lhs = match lhs {
        Ok(v) => v,
        Err(_) => {
            crate::special::hyp2f1_real_arg(
                c((p - q) / 2.0, 0.0),
                c(-(p + q + 2.0) / 2.0, 0.0),
                c(2.0 * n - 2.0, 0.0),
                (r * r - 1.0) / (r * r),
                crate::special::DEFAULT_TOL,
            )?
            .value
        }
    };
    let rhs = r.powf(p - q) * hyp2f1(c((p - q) / 2.0, 0.0), c((p + q) / 2.0 + 2.0 * n - 1.0, 0.0), c(2.0 * n - 2.0, 0.0), 1.0 - r * r)?;
    let mut worst = rel(lhs, rhs);
    let mut rng = rng_for(seed, "pfaff");
    for _ in 0..40 {
        let a = random_in_disc(&mut rng, 3.0);
        let b = random_in_disc(&mut rng, 3.0);
        let cc = c(rng.random_range(0.5..5.0), rng.random_range(-1.0..1.0));
        let z = 0.8 * rng.random::<f64>();
        let direct = hyp2f1(a, b, cc, z)?;
        worst = worst.max(rel(pfaff_transform(a, b, cc, z)?, direct));
    }
    Ok(worst)
}

/// Kernel invariance under 100 random `(k, x, omega)`; residual
/// `|P(kx, k omega) - P(x, omega)| / (1 + |P(x, omega)|)`.
pub fn check_kernel_invariance(n: u32, seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed, "kernel_invariance");
    let mut worst: f64 = 0.0;
    let dim = n as usize;
    for trial in 0..100 {
        let il = c(rng.random_range(0.1..4.0), rng.random_range(-3.0..3.0));
        let params = SpectralParams::with_i_lambda(n, (trial % 5) as u32, il)?;
        let k = KElement::random(&mut rng, dim);
        let x = HVector::random_in_ball(&mut rng, dim, 0.95);
        let w = HVector::random_unit(&mut rng, dim);
        let before = poisson_kernel(&params, &x, &w)?;
        let kw = k.apply(&w)?;
        let kw = kw.scale(1.0 / kw.norm());
        let after = poisson_kernel(&params, &k.apply(&x)?, &kw)?;
        worst = worst.max((after - before).norm() / (1.0 + before.norm()));
    }
    Ok(worst)
}

/// Refitting the measure constant on a doubled grid.
pub fn check_measure(grid: &ZonalGrid) -> Result<f64> {
    let fitted = grid.c_n().ok_or(Error::NotNormalized)?;
    let mut fine = grid.resized(grid.size() * 2)?;
    Ok((normalize_measure(&mut fine)? - fitted).abs())
}

/// Quadrature of the constant function against the elementary spherical
/// function for `2l` in `{0, 1, 2}`, `i lambda` in `{1, 1.5 + 0.5i}`, nine radii.
pub fn check_elementary(grid: &ZonalGrid) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for twice_l in 0..=2 {
        for il in [c(1.0, 0.0), c(1.5, 0.5)] {
            let params = SpectralParams::with_i_lambda(grid.n(), twice_l, il)?;
            for r in profile_radii() {
                let q = poisson_quadrature(&params, |_| c(1.0, 0.0), r, grid)?;
                worst = worst.max(rel(q, elementary_spherical(&params, r)?));
            }
        }
    }
    Ok(worst)
}

/// K-types and `2l` values of the scalarity check.
pub const SCALARITY_KTYPES: [(i64, i64); 5] = [(0, 0), (1, 1), (0, 2), (2, 2), (1, 3)];
pub const SCALARITY_I_LAMBDA: f64 = 1.5;

/// Radial profiles of the quadrature transform of `phi_{p,q}` against both
/// candidate closed forms. Returns the worst spread for `[r^q, r^p]` and the
/// mean ratios for `r^q`.
pub fn check_scalarity_profiles(grid: &ZonalGrid) -> Result<([f64; 2], Vec<Proportionality>)> {
    let n = grid.n();
    let mut spreads = [0.0_f64; 2];
    let mut constants = Vec::new();
    for twice_l in 0..=2 {
        let params = SpectralParams::with_i_lambda(n, twice_l, c(SCALARITY_I_LAMBDA, 0.0))?;
        for &(p, q) in &SCALARITY_KTYPES {
            let k = kt(p, q);
            let f = KFiniteFunction::single(k, c(1.0, 0.0));
            let mut ratios = [Vec::new(), Vec::new()];
            for r in profile_radii() {
                let quad = poisson_quadrature_kfinite(&params, &f, r, grid)?;
                for (slot, e) in [RadialExponent::Q, RadialExponent::P].into_iter().enumerate() {
                    let closed = generalized_spherical_terms(&params, k, r, e)?.value();
                    ratios[slot].push(quad / closed);
                }
            }
            for slot in 0..2 {
                spreads[slot] = spreads[slot].max(relative_spread(&ratios[slot]));
            }
            let mean = ratios[0].iter().sum::<Complex>() / ratios[0].len() as f64;
            constants.push(Proportionality {
                n,
                twice_l,
                ktype: k,
                re: mean.re,
                im: mean.im,
            });
        }
    }
    Ok((spreads, constants))
}

/// Boundary angles for the point-independence part of the scalarity check:
/// `u = (cos(alpha) + y sin(alpha)) e_1`, avoiding zeros of `phi_{p,q}(u)`.
pub const SCALARITY_ANGLES: [f64; 5] = [0.0, 0.4, 1.3, 2.0, 2.7];

/// `P(phi_{p,q})(r u) / phi_{p,q}(u)` across five boundary points `u`.
pub fn check_scalarity_points(grid: &ZonalGrid) -> Result<f64> {
    let n = grid.n();
    let mut worst: f64 = 0.0;
    for twice_l in 0..=2 {
        let params = SpectralParams::with_i_lambda(n, twice_l, c(SCALARITY_I_LAMBDA, 0.0))?;
        for &(p, q) in &SCALARITY_KTYPES {
            let k = kt(p, q);
            let f = KFiniteFunction::single(k, c(1.0, 0.0));
            for r in [0.5, 0.9] {
                let ratios = SCALARITY_ANGLES
                    .iter()
                    .map(|&alpha| {
                        let v = poisson_quadrature_off_axis(&params, |nd| f.eval_cosines(n, nd.r, nd.cos), r, alpha, grid, 64)?;
                        Ok(v / zonal_on_axis_circle(k, alpha))
                    })
                    .collect::<Result<Vec<_>>>()?;
                worst = worst.max(relative_spread(&ratios));
            }
        }
    }
    Ok(worst)
}

/// Values of `i lambda` used for the boundary limits.
pub const LIMIT_I_LAMBDA: [(f64, f64); 2] = [(4.0, 0.0), (3.5, 1.0)];
pub const LIMIT_KTYPES: [(i64, i64); 4] = [(0, 0), (1, 1), (0, 2), (2, 4)];

/// Extrapolated scaled spherical functions against `C_l(lambda)` and against
/// each other, plus the generic limit law on one parameter set.
pub fn check_limit(n: u32) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for twice_l in 0..=2 {
        for (a, b) in LIMIT_I_LAMBDA {
            let params = SpectralParams::with_i_lambda(n, twice_l, c(a, b))?;
            let target = c_constant(&params)?;
            let limits = LIMIT_KTYPES
                .iter()
                .map(|&(p, q)| spherical_limit(&params, kt(p, q), &LIMIT_RADII).map(|e| e.value))
                .collect::<Result<Vec<_>>>()?;
            for (i, v) in limits.iter().enumerate() {
                worst = worst.max(rel(*v, target));
                for w in &limits[i + 1..] {
                    worst = worst.max((v - w).norm() / target.norm());
                }
            }
        }
    }
    let bp = BracketParams {
        a: c(3.5, 0.0),
        b: c(1.5, 0.0),
        c: c(4.0, 0.0),
        alpha: 2,
        beta: 0,
    };
    let (ex, closed) = limit_law_check(&bp, &[0.9, 0.99, 0.999])?;
    Ok(worst.max(rel(ex, closed)))
}

/// `Phi_{lambda,l,0,0} / Phi_{lambda,l}` over nine radii.
pub fn check_zonal_ratio(n: u32) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for twice_l in 0..=3 {
        for il in [c(1.0, 0.0), c(1.5, 0.5), c(2.5, -1.0)] {
            let params = SpectralParams::with_i_lambda(n, twice_l, il)?;
            let ratios = profile_radii()
                .into_iter()
                .map(|r| {
                    let g = generalized_spherical_terms(&params, kt(0, 0), r, RadialExponent::Q)?.value();
                    Ok(g / elementary_spherical(&params, r)?)
                })
                .collect::<Result<Vec<_>>>()?;
            worst = worst.max(relative_spread(&ratios));
        }
    }
    Ok(worst)
}

/// For `l = 0`, the bracket against its single-2F1 collapse.
pub fn check_bracket_collapse(n: u32) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for il in [c(1.0, 0.0), c(1.5, 0.5), c(2.5, -1.0)] {
        let params = SpectralParams::with_i_lambda(n, 0, il)?;
        for k in ktype_enumerate(4) {
            for r in profile_radii() {
                let bracket = generalized_spherical_terms(&params, k, r, RadialExponent::Q)?.bracket();
                worst = worst.max(rel(bracket, collapsed_bracket_l0(&params, k, r)?));
            }
        }
    }
    Ok(worst)
}

/// The scaled elementary function at the real parameter `Re(i lambda)` stays
/// below `delta_l(lambda)` on a radial sweep. Returns the worst excess over
/// the bound (zero when it holds), relative to the bound.
pub fn check_delta_bound(n: u32) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let radii: Vec<f64> = (0..100).map(|k| k as f64 / 100.0).chain([0.995, 0.999]).collect();
    for twice_l in 0..=2 {
        for il in [c(1.0, 0.0), c(1.5, 0.5), c(3.0, -1.0)] {
            let params = SpectralParams::with_i_lambda(n, twice_l, il)?;
            let real = real_part_params(&params)?;
            let delta = delta_constant(&params)?;
            for &r in &radii {
                let phi = elementary_spherical(&real, r)?;
                let scaled = phi.re * (1.0 - r * r).powf(-(real.rho() - real.i_lambda().re) / 2.0);
                worst = worst.max((scaled - delta).max(0.0) / delta);
            }
        }
    }
    Ok(worst)
}

/// Radii sampled by the Hardy norm in the sandwich check.
pub fn hardy_radii() -> Vec<f64> {
    (0..20).map(|k| k as f64 / 20.0).chain([0.99, 0.999]).collect()
}

/// Random K-finite function with at most `max_terms` terms of degree <= 4.
pub fn random_kfinite<R: Rng>(rng: &mut R, max_terms: usize) -> KFiniteFunction {
    let pool = ktype_enumerate(4);
    let count = rng.random_range(1..=max_terms);
    let mut chosen: Vec<KTypeIndex> = Vec::new();
    while chosen.len() < count {
        let k = pool[rng.random_range(0..pool.len())];
        if !chosen.contains(&k) {
            chosen.push(k);
        }
    }
    let terms = chosen.into_iter().map(|k| (k, random_in_disc(rng, 1.0) + 0.1)).collect();
    KFiniteFunction::new(terms).expect("distinct K-types")
}

/// Sandwich inequality for 10 random K-finite `f` and `p` in `{2, 3}`, plus
/// homogeneity under `f -> 10 f`. Returns the worst violation.
pub fn check_sandwich(grid: &ZonalGrid, seed: u64) -> Result<f64> {
    let mut rng = rng_for(seed, "sandwich");
    let radii = hardy_radii();
    let mut worst: f64 = 0.0;
    for trial in 0..10 {
        let il = if trial % 2 == 0 { c(1.0, 0.0) } else { c(1.5, 0.5) };
        let params = SpectralParams::with_i_lambda(grid.n(), (trial % 3) as u32, il)?;
        let f = random_kfinite(&mut rng, 4);
        for p_exp in [2.0, 3.0] {
            let s = sandwich_check(&params, &f, p_exp, &radii, grid)?;
            worst = worst.max((1.0 - s.hardy.value / s.lower).max(0.0));
            worst = worst.max((s.hardy.value / s.upper - 1.0).max(0.0));
            let s10 = sandwich_check(&params, &f.scale(c(10.0, 0.0)), p_exp, &radii, grid)?;
            let homogeneity = [
                (s10.hardy.value, s.hardy.value),
                (s10.f_norm, s.f_norm),
                (s10.lower, s.lower),
                (s10.upper, s.upper),
            ]
            .iter()
            .map(|&(big, small)| (big - 10.0 * small).abs() / big.max(1e-300))
            .fold(0.0, f64::max);
            worst = worst.max(homogeneity);
            if (s10.lower_ok, s10.upper_ok) != (s.lower_ok, s.upper_ok) {
                worst = worst.max(1.0);
            }
        }
    }
    Ok(worst)
}

/// Relative gap between the scaled norm at `r = 0.999` and the boundary
/// value `|C_l| ||f||_p`, for information next to the sandwich check.
pub fn boundary_gap(params: &SpectralParams, f: &KFiniteFunction, p_exp: f64, grid: &ZonalGrid) -> Result<f64> {
    let near = scaled_lp_norm(params, f, p_exp, 0.999, grid)?;
    let limit = c_constant(params)?.norm() * crate::transform::lp_norm(f, p_exp, grid)?;
    Ok((near - limit).abs() / limit)
}

/// The 3-term function used by the inversion check.
pub fn inversion_function() -> KFiniteFunction {
    KFiniteFunction::new(vec![
        (kt(0, 0), c(1.0, 0.0)),
        (kt(1, 1), c(0.5, -0.25)),
        (kt(0, 2), c(-0.3, 0.4)),
    ])
    .expect("distinct K-types")
}

pub const INVERSION_I_LAMBDA: (f64, f64) = (2.0, 0.5);

/// Inversion errors along [`LIMIT_RADII`]; the residual is the error at the
/// last radius, or infinity when the sequence is not strictly decreasing.
pub fn check_inversion(grid: &ZonalGrid) -> Result<(f64, Vec<f64>)> {
    let params = SpectralParams::with_i_lambda(grid.n(), 1, c(INVERSION_I_LAMBDA.0, INVERSION_I_LAMBDA.1))?;
    let f = inversion_function();
    let errors = LIMIT_RADII
        .iter()
        .map(|&r| inversion_error(&params, &f, r, grid))
        .collect::<Result<Vec<_>>>()?;
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let last = *errors.last().expect("three radii");
    Ok((if decreasing { last } else { f64::INFINITY }, errors))
}

/// Runs every check. Numerical failures inside a check are reported as a
/// failed check with an infinite residual, except non-convergence, which is
/// returned as an error.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let grid = ZonalGrid::normalized(config.n, config.grid_size)?;
    let mut fitted = Fitted {
        c_n: grid.c_n(),
        ..Fitted::default()
    };
    let mut checks = Vec::new();
    for &(name, default_tol) in CHECKS {
        let tolerance = config.tolerances.get(name).copied().unwrap_or(default_tol);
        let start = Instant::now();
        let outcome: Result<f64> = match name {
            "takahashi" => check_takahashi(config.seed),
            "bateman" => check_bateman(config.seed),
            "contiguous" => check_contiguous(config.seed).map(|(printed, classical)| {
                fitted.contiguous_sign = Some(if classical < printed {
                    ContiguousSign::Classical
                } else {
                    ContiguousSign::AsPrinted
                });
                classical.min(printed)
            }),
            "rodrigues" => Ok(check_rodrigues()),
            "pfaff" => check_pfaff(config.seed),
            "kernel_invariance" => check_kernel_invariance(config.n, config.seed),
            "measure" => check_measure(&grid),
            "elementary" => check_elementary(&grid),
            "scalarity" => check_scalarity_profiles(&grid).map(|(spreads, constants)| {
                let winner = if spreads[0] <= spreads[1] { RadialExponent::Q } else { RadialExponent::P };
                fitted.radial_exponent = Some(winner);
                fitted.radial_exponent_spreads = Some(spreads);
                fitted.proportionality = constants;
                spreads[0].min(spreads[1])
            }),
            "scalarity_points" => check_scalarity_points(&grid),
            "limit" => check_limit(config.n),
            "zonal_ratio" => check_zonal_ratio(config.n),
            "bracket_collapse" => check_bracket_collapse(config.n),
            "delta_bound" => check_delta_bound(config.n),
            "sandwich" => check_sandwich(&grid, config.seed),
            "inversion" => check_inversion(&grid).map(|(r, _)| r),
            _ => unreachable!("unknown check {name}"),
        };
        let residual = match outcome {
            Ok(v) => v,
            Err(e @ Error::NoConvergence { .. }) => return Err(e),
            Err(_) => f64::INFINITY,
        };
        let runtime_ms = config.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        checks.push(CheckOutcome {
            check_name: name.to_string(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            runtime_ms,
        });
    }
    Ok(SuiteReport {
        n: config.n,
        seed: config.seed,
        grid_size: config.grid_size,
        checks,
        fitted,
    })
}
