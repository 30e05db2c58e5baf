//! Gauss-Legendre product quadrature for the reduced boundary measure
//! `c_n (1 - r^2)^(2n-3) r^3 sin^2(theta) dtheta dr` on `[0,1) x [0,pi]`,
//! plus the integral oracles for Takahashi's lemma and Bateman's formula.
//!
//! Sums over the grid are computed row by row in parallel and combined by
//! pairwise summation in a fixed order, so results do not depend on the
//! number of worker threads.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::special::{complex_gamma, hyp2f1, hyp2f1_real_arg, recip_gamma, DEFAULT_TOL};
use crate::Complex;

pub const MAX_GAUSS_NODES: usize = 2048;
pub const DEFAULT_GRID_SIZE: usize = 256;

/// Nodes and weights of the `k`-point Gauss-Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre(k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(1..=MAX_GAUSS_NODES).contains(&k) {
        return Err(domain(format!("Gauss-Legendre order {k} outside 1..={MAX_GAUSS_NODES}")));
    }
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let kf = k as f64;
    for i in 0..k.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(k, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if k == 0 {
        return (1.0, 0.0);
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(k: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (x, w) = gauss_legendre(k)?;
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    Ok((x.iter().map(|t| mid + half * t).collect(), w.iter().map(|v| v * half).collect()))
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(values: &[Complex]) -> Complex {
    match values.len() {
        0 => Complex::new(0.0, 0.0),
        1..=8 => values.iter().sum(),
        len => {
            let (a, b) = values.split_at(len / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// One node of the product grid. `weight` already contains the density
/// `(1 - r^2)^(2n-3) r^3 sin^2(theta)` but not the constant `c_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZonalNode {
    pub r: f64,
    pub theta: f64,
    pub cos: f64,
    pub sin: f64,
    pub weight: f64,
}

/// Product grid for the reduced measure, immutable once built.
#[derive(Debug, Clone)]
pub struct ZonalGrid {
    n: u32,
    size: usize,
    pub r_nodes: Vec<f64>,
    pub r_weights: Vec<f64>,
    pub theta_nodes: Vec<f64>,
    pub theta_weights: Vec<f64>,
    nodes: Vec<ZonalNode>,
    c_n: Option<f64>,
}

/// `(pi/4) Gamma(2) Gamma(2n-2) / Gamma(2n)`, the mass the fit targets.
pub fn reference_mass(n: u32) -> Result<f64> {
    let g = |x: f64| complex_gamma(Complex::new(x, 0.0)).map(|v| v.re);
    Ok(PI / 4.0 * g(2.0)? * g((2 * n - 2) as f64)? / g((2 * n) as f64)?)
}

impl ZonalGrid {
    /// Unnormalized `size x size` grid.
    pub fn new(n: u32, size: usize) -> Result<Self> {
        if n < 2 {
            return Err(domain("the reduced measure needs n >= 2"));
        }
        let (r_nodes, r_weights) = gauss_legendre_on(size, 0.0, 1.0)?;
        let (theta_nodes, theta_weights) = gauss_legendre_on(size, 0.0, PI)?;
        let power = (2 * n - 3) as i32;
        let mut nodes = Vec::with_capacity(size * size);
        for (&r, &wr) in r_nodes.iter().zip(&r_weights) {
            let radial = wr * (1.0 - r * r).powi(power) * r * r * r;
            for (&t, &wt) in theta_nodes.iter().zip(&theta_weights) {
                let (sin, cos) = t.sin_cos();
                nodes.push(ZonalNode {
                    r,
                    theta: t,
                    cos,
                    sin,
                    weight: radial * wt * sin * sin,
                });
            }
        }
        Ok(ZonalGrid {
            n,
            size,
            r_nodes,
            r_weights,
            theta_nodes,
            theta_weights,
            nodes,
            c_n: None,
        })
    }

    /// Built and fitted in one step.
    pub fn normalized(n: u32, size: usize) -> Result<Self> {
        let mut grid = ZonalGrid::new(n, size)?;
        normalize_measure(&mut grid)?;
        Ok(grid)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn c_n(&self) -> Option<f64> {
        self.c_n
    }

    pub fn nodes(&self) -> &[ZonalNode] {
        &self.nodes
    }

    /// Rows of the grid, one per radial node.
    pub fn rows(&self) -> std::slice::Chunks<'_, ZonalNode> {
        self.nodes.chunks(self.size)
    }

    /// Same construction with a different node count, carrying over `c_n`.
    pub fn resized(&self, size: usize) -> Result<Self> {
        let mut g = ZonalGrid::new(self.n, size)?;
        g.c_n = self.c_n;
        Ok(g)
    }

    /// Unnormalized weighted sum `sum w g`.
    pub fn raw_sum<G>(&self, g: G) -> Complex
    where
        G: Fn(&ZonalNode) -> Complex + Sync,
    {
        let rows: Vec<Complex> = self
            .nodes
            .par_chunks(self.size)
            .map(|row| {
                let terms: Vec<Complex> = row.iter().map(|nd| g(nd) * nd.weight).collect();
                pairwise_sum(&terms)
            })
            .collect();
        pairwise_sum(&rows)
    }
}

/// Fits `c_n` so that the constant function integrates to
/// [`reference_mass`], freezes it in the grid and returns it.
pub fn normalize_measure(grid: &mut ZonalGrid) -> Result<f64> {
    let raw = grid.raw_sum(|_| Complex::new(1.0, 0.0)).re;
    let c = reference_mass(grid.n)? / raw;
    grid.c_n = Some(c);
    Ok(c)
}

/// `c_n sum w g` over the grid.
pub fn zonal_integral<G>(g: G, grid: &ZonalGrid) -> Result<Complex>
where
    G: Fn(&ZonalNode) -> Complex + Sync,
{
    let c = grid.c_n.ok_or(Error::NotNormalized)?;
    let v = grid.raw_sum(g) * c;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("zonal integral"))
    }
}

/// Value together with the change relative to the half-size grid, which
/// serves as the error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex,
    pub error: f64,
}

pub fn zonal_integral_with_error<G>(g: G, grid: &ZonalGrid) -> Result<Estimate>
where
    G: Fn(&ZonalNode) -> Complex + Sync,
{
    let value = zonal_integral(&g, grid)?;
    let coarse = zonal_integral(&g, &grid.resized((grid.size / 2).max(1))?)?;
    Ok(Estimate {
        value,
        error: (value - coarse).norm(),
    })
}

/// Periodic trapezoid rule on `[-pi, pi)` with doubling until two successive
/// values agree to `tol` relative.
fn periodic_trapezoid<F: Fn(f64) -> Complex>(f: F, tol: f64) -> Result<Complex> {
    let mut m = 16usize;
    let mut prev: Option<Complex> = None;
    while m <= 1 << 18 {
        let h = 2.0 * PI / m as f64;
        let vals: Vec<Complex> = (0..m).map(|j| f(-PI + j as f64 * h)).collect();
        let v = pairwise_sum(&vals) * h;
        if let Some(p) = prev {
            if (v - p).norm() <= tol * v.norm().max(1.0) {
                return Ok(v);
            }
        }
        prev = Some(v);
        m *= 2;
    }
    Err(Error::NoConvergence {
        what: "periodic trapezoid rule",
        iterations: 1 << 18,
    })
}

/// Takahashi's integral: quadrature of
/// `int_{-pi}^{pi} sin(t) / ((1 + eta e^{it})^alpha (1 + eta e^{-it})^beta) dt`
/// and the closed form `(beta - alpha) eta pi i 2F1(alpha, beta; 2; eta^2)`.
pub fn takahashi_check(alpha: Complex, beta: Complex, eta: f64) -> Result<(Complex, Complex)> {
    if !(0.0..1.0).contains(&eta) {
        return Err(domain(format!("eta = {eta} outside [0, 1)")));
    }
    let integrand = |t: f64| {
        let e = Complex::from_polar(eta, t);
        let plus = (alpha * (1.0 + e).ln()).exp();
        let minus = (beta * (1.0 + e.conj()).ln()).exp();
        Complex::new(t.sin(), 0.0) / (plus * minus)
    };
    let lhs = periodic_trapezoid(integrand, 1e-14)?;
    let rhs = (beta - alpha) * eta * PI * Complex::i() * hyp2f1(alpha, beta, Complex::new(2.0, 0.0), eta * eta)?;
    Ok((lhs, rhs))
}

/// Tanh-sinh quadrature of `f(x, 1 - x)` over `(0, 1)`, halving the step
/// until two levels agree to `tol` relative. Passing `1 - x` separately keeps
/// endpoint singularities at `x = 1` accurate.
pub fn tanh_sinh<F: Fn(f64, f64) -> Complex>(f: F, tol: f64) -> Result<Complex> {
    let node = |t: f64| {
        let u = PI / 2.0 * t.sinh();
        let x = 1.0 / (1.0 + (-2.0 * u).exp());
        let y = 1.0 / (1.0 + (2.0 * u).exp());
        let w = PI / 2.0 * t.cosh() / (2.0 * u.cosh() * u.cosh());
        (x, y, w)
    };
    // far enough that x^(s-1) tails below 1e-300 are covered
    let t_max = 6.5;
    let mut h = 0.5;
    let mut prev: Option<Complex> = None;
    for level in 0..12 {
        let count = (t_max / h) as i64;
        let mut vals = Vec::with_capacity(2 * count as usize + 1);
        for k in -count..=count {
            let (x, y, w) = node(k as f64 * h);
            if x > 0.0 && y > 0.0 && w > 0.0 {
                vals.push(f(x, y) * w);
            }
        }
        let v = pairwise_sum(&vals) * h;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite("tanh-sinh quadrature"));
        }
        if let Some(p) = prev {
            if level >= 2 && (v - p).norm() <= tol * v.norm().max(1.0) {
                return Ok(v);
            }
        }
        prev = Some(v);
        h /= 2.0;
    }
    Err(Error::NoConvergence {
        what: "tanh-sinh quadrature",
        iterations: 12,
    })
}

/// Bateman's integral: the series `2F1(a, b; c; z)` against
/// `Gamma(c)/(Gamma(s)Gamma(c-s)) int_0^1 x^(s-1)(1-x)^(c-s-1) 2F1(a, b; s; xz) dx`.
pub fn bateman_check(a: Complex, b: Complex, c: Complex, sp: Complex, z: f64) -> Result<(Complex, Complex)> {
    if !(c.re > sp.re && sp.re > 0.0) {
        return Err(domain("Bateman's formula needs Re(c) > Re(s) > 0"));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(domain(format!("z = {z} outside [0, 1)")));
    }
    let lhs = hyp2f1(a, b, c, z)?;
    let norm = complex_gamma(c)? * recip_gamma(sp)? * recip_gamma(c - sp)?;
    let err = std::cell::Cell::new(None);
    let integrand = |x: f64, y: f64| {
        let weight = ((sp - 1.0) * x.ln() + (c - sp - 1.0) * y.ln()).exp();
        match hyp2f1_real_arg(a, b, sp, x * z, DEFAULT_TOL) {
            Ok(f) => weight * f.value,
            Err(e) => {
                err.set(Some(e));
                Complex::new(0.0, 0.0)
            }
        }
    };
    let integral = tanh_sinh(integrand, 1e-13)?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok((lhs, norm * integral))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn small_rules() {
        let (x, w) = gauss_legendre(1).unwrap();
        assert_eq!((x[0], w[0]), (0.0, 2.0));
        let (x, w) = gauss_legendre(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((x[0] + s).abs() < 1e-15 && (x[1] - s).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3).unwrap();
        let quartic: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((quartic - 0.4).abs() < 1e-14);
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(2049).is_err());
    }

    #[test]
    fn large_rules_are_exact_for_polynomials() {
        for k in [17, 256, 1024, 2048] {
            let (x, w) = gauss_legendre(k).unwrap();
            assert!(w.iter().all(|&v| v > 0.0));
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13);
            // x^(2k-2), the top even degree the rule must integrate
            let deg = (2 * k - 2) as i32;
            let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            assert!((v - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "k = {k}");
            for &node in x.iter().step_by(97) {
                // Newton step from the node, i.e. its distance to the true root
                let (p, d) = legendre_with_derivative(k, node);
                assert!((p / d).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn measure_constant_is_one_for_the_proof_realization() {
        for n in 2..=5 {
            let mut grid = ZonalGrid::new(n, 64).unwrap();
            assert_eq!(zonal_integral(|_| c(1.0, 0.0), &grid), Err(Error::NotNormalized));
            let cn = normalize_measure(&mut grid).unwrap();
            assert!((cn - 1.0).abs() < 1e-13, "n = {n}: {cn}");
            let refit = normalize_measure(&mut grid.resized(128).unwrap()).unwrap();
            assert!((refit - cn).abs() < 1e-10);
        }
        // n = 2 by hand: int (1-r^2) r^3 dr = 1/12, int sin^2 = pi/2, target pi/24
        assert!((reference_mass(2).unwrap() - PI / 24.0).abs() < 1e-15);
        let grid = ZonalGrid::normalized(3, 64).unwrap();
        let mass = zonal_integral(|_| c(1.0, 0.0), &grid).unwrap();
        assert!((mass.re - PI / 4.0 * 6.0 / 120.0).abs() < 1e-10);
    }

    #[test]
    fn odd_integrand_against_dense_grid() {
        let g = |nd: &ZonalNode| c(nd.r * nd.cos, 0.0);
        let coarse = zonal_integral(g, &ZonalGrid::normalized(2, 64).unwrap()).unwrap();
        let dense = zonal_integral(g, &ZonalGrid::normalized(2, 512).unwrap()).unwrap();
        assert!((coarse - dense).norm() < 1e-10);
        // odd in theta -> pi - theta, so the exact value is zero
        assert!(dense.norm() < 1e-14);
        let g = |nd: &ZonalNode| c((nd.r * nd.cos).exp(), nd.r * nd.r);
        let coarse = zonal_integral(g, &ZonalGrid::normalized(2, 64).unwrap()).unwrap();
        let dense = zonal_integral(g, &ZonalGrid::normalized(2, 512).unwrap()).unwrap();
        assert!((coarse - dense).norm() < 1e-10);
    }

    #[test]
    fn error_estimate_shrinks_and_covers_refinement() {
        let g = |nd: &ZonalNode| c((3.0 * nd.r * nd.cos).exp() / (1.2 - nd.r), 0.0);
        let mut last = f64::INFINITY;
        for size in [4, 8, 16, 32] {
            let grid = ZonalGrid::normalized(2, size).unwrap();
            let est = zonal_integral_with_error(g, &grid).unwrap();
            let finer = zonal_integral(g, &grid.resized(2 * size).unwrap()).unwrap();
            assert!(est.error < last, "size {size}");
            assert!((finer - est.value).norm() < est.error, "size {size}");
            last = est.error;
        }
    }

    #[test]
    fn deterministic_regardless_of_threads() {
        let grid = ZonalGrid::normalized(2, 128).unwrap();
        let g = |nd: &ZonalNode| c(nd.r.sin() * nd.cos, nd.theta);
        let a = zonal_integral(g, &grid).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| zonal_integral(g, &grid).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn takahashi_examples() {
        let (l, r) = takahashi_check(c(1.3, 0.2), c(1.3, 0.2), 0.7).unwrap();
        assert!(l.norm() < 1e-14 && r.norm() == 0.0);
        let (l, r) = takahashi_check(c(2.0, 1.0), c(-1.0, 0.5), 0.0).unwrap();
        assert!(l.norm() < 1e-15 && r.norm() == 0.0);
        let (l, r) = takahashi_check(c(2.0, 0.0), c(1.0, 0.0), 0.5).unwrap();
        assert!((l - r).norm() < 1e-9);
        assert!(takahashi_check(c(1.0, 0.0), c(2.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn bateman_examples() {
        let (l, r) = bateman_check(c(0.7, 0.0), c(1.1, 0.0), c(4.0, 0.0), c(2.0, 0.0), 0.0).unwrap();
        assert!((l - 1.0).norm() < 1e-15 && (r - 1.0).norm() < 1e-10);
        let (l, r) = bateman_check(c(0.7, 0.0), c(1.1, 0.0), c(4.0, 0.0), c(2.0, 0.0), 0.5).unwrap();
        assert!((l - r).norm() < 1e-8);
        // the elementary spherical function setting: c = 2n, s = 2, z = tanh^2 t
        let s = c(3.2, 0.7);
        let (l, r) = bateman_check(s, s - 1.0, c(4.0, 0.0), c(2.0, 0.0), 0.25).unwrap();
        assert!((l - r).norm() < 1e-8 * l.norm().max(1.0));
        // endpoint singularities of the Beta weight
        let (l, r) = bateman_check(c(0.3, 0.4), c(-1.2, 0.1), c(1.1, 0.2), c(0.4, -0.3), 0.8).unwrap();
        assert!((l - r).norm() < 1e-8 * l.norm().max(1.0), "{l} {r}");
        assert!(bateman_check(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(2.5, 0.0), 0.3).is_err());
    }
}
