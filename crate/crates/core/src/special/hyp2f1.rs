//! Gauss hypergeometric function `2F1(a, b; c; x)` for complex parameters and a
//! real argument `x < 1`.
//!
//! Routing:
//! - `x` in `[-1/2, 0.85]` and terminating series: direct summation.
//! - `x < -1/2`: Pfaff identity on the second parameter, which lands in `(1/3, 1)`.
//! - `x > 0.85`: the `1 - x` connection formula when `c - a - b` is at least
//!   [`INTEGER_GAP`] away from an integer, direct summation otherwise.
//!
//! The direct sum stops once a geometric tail bound drops below
//! `tol * max(1, |partial sum|)`, and fails after [`MAX_TERMS`] terms.

use crate::error::{domain, Error, Result};
use crate::special::{complex_gamma, nonpositive_integer, recip_gamma, POLE_TOLERANCE};
use crate::Complex;

pub const DEFAULT_TOL: f64 = 1e-15;
pub const MAX_TERMS: usize = 100_000;

const CONNECTION_FROM: f64 = 0.85;
const NEGATIVE_DIRECT_FROM: f64 = -0.5;
const INTEGER_GAP: f64 = 0.05;

/// A summed series with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex,
    pub terms_used: usize,
    /// Tail estimate of the omitted terms, relative to `max(1, |value|)`.
    pub truncation_bound: f64,
}

fn is_terminating(a: Complex) -> bool {
    a.im == 0.0 && a.re <= 0.0 && a.re.fract() == 0.0
}

fn check_c(c: Complex) -> Result<()> {
    if nonpositive_integer(c, POLE_TOLERANCE).is_some() {
        Err(Error::ParameterPole { re: c.re, im: c.im })
    } else {
        Ok(())
    }
}

fn finite(v: Complex) -> Result<Complex> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("2F1"))
    }
}

fn direct_series(a: Complex, b: Complex, c: Complex, x: f64, tol: f64) -> Result<SeriesResult> {
    let one = Complex::new(1.0, 0.0);
    let mut term = one;
    let mut sum = one;
    // past this index the term ratio is close to its limit |x|
    let settle = 2.0 * a.norm().max(b.norm()).max(c.norm()) + 2.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        let next = term * ratio;
        if next.re == 0.0 && next.im == 0.0 {
            return Ok(SeriesResult {
                value: finite(sum)?,
                terms_used: k + 1,
                truncation_bound: 0.0,
            });
        }
        let rho = ratio.norm().max(x.abs());
        if kf >= settle && rho < 1.0 {
            let scale = sum.norm().max(1.0);
            let tail = next.norm() / (1.0 - rho) / scale;
            if tail <= tol {
                return Ok(SeriesResult {
                    value: finite(sum)?,
                    terms_used: k + 1,
                    truncation_bound: tail,
                });
            }
        }
        sum += next;
        term = next;
    }
    Err(Error::NoConvergence {
        what: "2F1 series",
        iterations: MAX_TERMS,
    })
}

fn connection(a: Complex, b: Complex, c: Complex, x: f64, tol: f64) -> Result<SeriesResult> {
    let d = c - a - b;
    let h = 1.0 - x;
    let gc = complex_gamma(c)?;
    let w1 = gc * complex_gamma(d)? * recip_gamma(c - a)? * recip_gamma(c - b)?;
    let w2 = gc * complex_gamma(-d)? * recip_gamma(a)? * recip_gamma(b)? * (d * h.ln()).exp();
    // the two pieces may cancel, so tighten the inner tolerance until the
    // combined tail bound meets `tol` relative to the combined value
    let mut inner_tol = tol;
    let mut terms = 0;
    for _ in 0..4 {
        let f1 = direct_series(a, b, 1.0 - d, h, inner_tol)?;
        let f2 = direct_series(c - a, c - b, 1.0 + d, h, inner_tol)?;
        terms += f1.terms_used + f2.terms_used;
        let value = finite(w1 * f1.value + w2 * f2.value)?;
        let scale = value.norm().max(1.0);
        let bound = (w1.norm() * f1.truncation_bound * f1.value.norm().max(1.0)
            + w2.norm() * f2.truncation_bound * f2.value.norm().max(1.0))
            / scale;
        if bound <= tol {
            return Ok(SeriesResult {
                value,
                terms_used: terms,
                truncation_bound: bound,
            });
        }
        inner_tol *= (tol / bound).max(1e-8) * 0.5;
    }
    Err(Error::NoConvergence {
        what: "2F1 connection formula",
        iterations: terms,
    })
}

fn distance_to_integer(z: Complex) -> f64 {
    (z.re - z.re.round()).abs().hypot(z.im)
}

/// `2F1(a, b; c; x)` for any real `x < 1`, parameters taken in the order given.
///
/// Unlike [`gauss_2f1`] the pair `(a, b)` is not canonicalised, and for
/// `x < -1/2` the Pfaff identity is applied to `b`.
pub fn hyp2f1_real_arg(
    a: Complex,
    b: Complex,
    c: Complex,
    x: f64,
    tol: f64,
) -> Result<SeriesResult> {
    if !(x < 1.0) || !x.is_finite() {
        return Err(domain(format!("2F1 argument {x} must be finite and < 1")));
    }
    check_c(c)?;
    if x == 0.0 {
        return Ok(SeriesResult {
            value: Complex::new(1.0, 0.0),
            terms_used: 1,
            truncation_bound: 0.0,
        });
    }
    if is_terminating(a) || is_terminating(b) {
        return direct_series(a, b, c, x, tol);
    }
    if x < NEGATIVE_DIRECT_FROM {
        let w = x / (x - 1.0);
        let inner = hyp2f1_real_arg(c - a, b, c, w, tol)?;
        let factor = (-b * (1.0 - x).ln()).exp();
        return Ok(SeriesResult {
            value: finite(factor * inner.value)?,
            ..inner
        });
    }
    if x <= CONNECTION_FROM || distance_to_integer(c - a - b) < INTEGER_GAP {
        return direct_series(a, b, c, x, tol);
    }
    connection(a, b, c, x, tol)
}

/// Gauss hypergeometric function on `0 <= z < 1` with truncation control.
///
/// Symmetric in `a` and `b` by construction: the pair is put in a canonical
/// order before any arithmetic happens.
pub fn gauss_2f1(a: Complex, b: Complex, c: Complex, z: f64, tol: f64) -> Result<SeriesResult> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain(format!("2F1 argument {z} outside [0, 1)")));
    }
    let (a, b) = if (a.re, a.im).partial_cmp(&(b.re, b.im)) == Some(std::cmp::Ordering::Greater) {
        (b, a)
    } else {
        (a, b)
    };
    hyp2f1_real_arg(a, b, c, z, tol)
}

/// [`gauss_2f1`] at [`DEFAULT_TOL`], value only.
pub fn hyp2f1(a: Complex, b: Complex, c: Complex, z: f64) -> Result<Complex> {
    gauss_2f1(a, b, c, z, DEFAULT_TOL).map(|r| r.value)
}

/// `(1-z)^(-a) 2F1(a, c-b; c; z/(z-1))`, the Pfaff-transformed evaluation.
pub fn pfaff_transform(a: Complex, b: Complex, c: Complex, z: f64) -> Result<Complex> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain(format!("2F1 argument {z} outside [0, 1)")));
    }
    check_c(c)?;
    let w = z / (z - 1.0);
    let inner = hyp2f1_real_arg(a, c - b, c, w, DEFAULT_TOL)?;
    finite((-a * (1.0 - z).ln()).exp() * inner.value)
}

/// Right-hand side convention for `a F(a+1,b) - b F(a,b+1) = k F(a,b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContiguousSign {
    /// `k = b - a`.
    AsPrinted,
    /// `k = a - b`.
    Classical,
}

impl ContiguousSign {
    pub fn factor(self, a: Complex, b: Complex) -> Complex {
        match self {
            ContiguousSign::AsPrinted => b - a,
            ContiguousSign::Classical => a - b,
        }
    }
}

/// `|a F(a+1,b;c;z) - b F(a,b+1;c;z) - k F(a,b;c;z)| / max(1, |k F(a,b;c;z)|)`.
pub fn contiguous_relation_residual(
    a: Complex,
    b: Complex,
    c: Complex,
    z: f64,
    sign: ContiguousSign,
) -> Result<f64> {
    let lhs = a * hyp2f1(a + 1.0, b, c, z)? - b * hyp2f1(a, b + 1.0, c, z)?;
    let rhs = sign.factor(a, b) * hyp2f1(a, b, c, z)?;
    Ok((lhs - rhs).norm() / rhs.norm().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn r(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn zero_argument_is_one() {
        let v = gauss_2f1(c(1.2, 3.0), c(-0.4, 1.0), c(2.5, -1.0), 0.0, DEFAULT_TOL).unwrap();
        assert_eq!(v.value, r(1.0));
        assert_eq!(v.terms_used, 1);
    }

    #[test]
    fn logarithm_oracle() {
        for z in [0.1, 0.5, 0.8, 0.9, 0.99, 0.999] {
            let v = hyp2f1(r(1.0), r(1.0), r(2.0), z).unwrap();
            let expected = -(1.0 - z).ln() / z;
            assert!((v.re - expected).abs() < 1e-13 * expected, "z = {z}");
        }
        let v = hyp2f1(r(1.0), r(1.0), r(2.0), 0.5).unwrap();
        assert!((v.re - 1.386_294_361_119_890_6).abs() < 1e-14);
    }

    #[test]
    fn arcsine_oracle_through_connection_formula() {
        // 2F1(1/2, 1/2; 3/2; x^2) = asin(x)/x, and c - a - b = 1/2
        for x in [0.3_f64, 0.93, 0.97, 0.999] {
            let v = hyp2f1(r(0.5), r(0.5), r(1.5), x * x).unwrap();
            assert!((v.re - x.asin() / x).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn terminating_series_stops() {
        let v = gauss_2f1(r(-3.0), c(0.7, 0.2), r(1.5), 0.6, DEFAULT_TOL).unwrap();
        assert_eq!(v.terms_used, 4);
        assert_eq!(v.truncation_bound, 0.0);
        // (-3)_k (b)_k / ((c)_k k!) z^k summed by hand
        let b = c(0.7, 0.2);
        let cc = 1.5;
        let z = 0.6;
        let t1 = -3.0 * b / cc * z;
        let t2 = t1 * (-2.0) * (b + 1.0) / ((cc + 1.0) * 2.0) * z;
        let t3 = t2 * (-1.0) * (b + 2.0) / ((cc + 2.0) * 3.0) * z;
        assert!(rel(v.value, 1.0 + t1 + t2 + t3) < 1e-15);
    }

    #[test]
    fn parameter_pole() {
        assert!(matches!(
            gauss_2f1(r(1.0), r(1.0), r(-2.0), 0.3, DEFAULT_TOL),
            Err(Error::ParameterPole { .. })
        ));
        assert!(matches!(
            gauss_2f1(r(1.0), r(1.0), r(2.0), 1.0, DEFAULT_TOL),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn no_convergence_is_reported() {
        // integer c - a - b forces direct summation; 1 - 1e-9 needs ~4e10 terms
        let e = gauss_2f1(r(1.0), r(2.0), r(3.0), 1.0 - 1e-9, DEFAULT_TOL).unwrap_err();
        assert!(matches!(e, Error::NoConvergence { .. }));
    }

    #[test]
    fn truncation_bound_respects_tolerance() {
        for tol in [1e-6, 1e-10, 1e-15] {
            for z in [0.2, 0.8, 0.95] {
                let v = gauss_2f1(c(0.3, 1.0), c(1.7, -0.5), r(2.2), z, tol).unwrap();
                assert!(v.truncation_bound <= tol);
            }
        }
    }

    #[test]
    fn symmetric_in_upper_parameters() {
        let (a, b, cc) = (c(1.2, 0.5), c(0.4, -2.0), c(3.0, 1.0));
        for z in [0.0, 0.3, 0.86, 0.95, 0.999] {
            assert_eq!(hyp2f1(a, b, cc, z).unwrap(), hyp2f1(b, a, cc, z).unwrap());
        }
    }

    #[test]
    fn connection_matches_direct_series() {
        // just above the switch both routes are available
        let (a, b, cc) = (c(1.3, 0.4), c(0.2, -0.7), c(2.9, 0.1));
        let z = 0.9;
        let direct = direct_series(a, b, cc, z, 1e-16).unwrap().value;
        let conn = connection(a, b, cc, z, 1e-16).unwrap().value;
        assert!(rel(direct, conn) < 1e-12);
    }

    #[test]
    fn pfaff_matches_direct() {
        let (a, b, cc) = (r(0.5), r(0.5), r(1.0));
        let z = 0.5;
        let direct = hyp2f1(a, b, cc, z).unwrap();
        assert!(rel(pfaff_transform(a, b, cc, z).unwrap(), direct) < 1e-13);
        assert_eq!(pfaff_transform(a, b, cc, 0.0).unwrap(), r(1.0));
    }

    #[test]
    fn pfaff_in_zonal_harmonic_form() {
        // 2F1((p-q)/2, -(p+q+2)/2; 2n-2; (r^2-1)/r^2)
        //   = r^(p-q) 2F1((p-q)/2, (p+q)/2+2n-1; 2n-2; 1-r^2)
        let (p, q, n, rad) = (1.0, 3.0, 2.0, 0.7_f64);
        let lhs = hyp2f1_real_arg(
            r((p - q) / 2.0),
            r(-(p + q + 2.0) / 2.0),
            r(2.0 * n - 2.0),
            (rad * rad - 1.0) / (rad * rad),
            DEFAULT_TOL,
        )
        .unwrap()
        .value;
        let rhs = rad.powf(p - q)
            * hyp2f1(r((p - q) / 2.0), r((p + q) / 2.0 + 2.0 * n - 1.0), r(2.0 * n - 2.0), 1.0 - rad * rad)
                .unwrap();
        assert!(rel(lhs, rhs) < 1e-13, "{lhs} vs {rhs}");
    }

    #[test]
    fn contiguous_sign_is_classical() {
        let (a, b, cc, z) = (c(1.2, 0.5), r(0.4), r(3.0), 0.6);
        let classical = contiguous_relation_residual(a, b, cc, z, ContiguousSign::Classical).unwrap();
        let printed = contiguous_relation_residual(a, b, cc, z, ContiguousSign::AsPrinted).unwrap();
        assert!(classical < 1e-10);
        assert!(printed > 0.1);
        // at z = 0 every 2F1 is 1, so the printed sign leaves 2(a - b)
        let at_zero = contiguous_relation_residual(a, b, cc, 0.0, ContiguousSign::AsPrinted).unwrap();
        let expected = 2.0 * (a - b).norm() / (b - a).norm().max(1.0);
        assert!((at_zero - expected).abs() < 1e-15);
    }

    #[test]
    fn contiguous_equal_parameters() {
        let a = c(0.8, -0.3);
        let lhs = a * (hyp2f1(a + 1.0, a, r(2.5), 0.7).unwrap() - hyp2f1(a, a + 1.0, r(2.5), 0.7).unwrap());
        assert_eq!(lhs, r(0.0));
    }

    #[test]
    fn gauss_summation_limit() {
        // Re(c - a - b) > 0: F(z) = G + O(h^(c-a-b)) + O(h); eliminate both.
        let (a, b, cc) = (c(0.3, 0.4), c(0.9, -0.2), c(2.7, 0.5));
        let d = cc - a - b;
        let g = complex_gamma(cc).unwrap() * complex_gamma(d).unwrap()
            / (complex_gamma(cc - a).unwrap() * complex_gamma(cc - b).unwrap());
        let hs = [1e-6, 1e-7, 1e-8];
        let vals: Vec<Complex> = hs.iter().map(|h| hyp2f1(a, b, cc, 1.0 - h).unwrap()).collect();
        // solve v_i = G + x h_i^d + y h_i by elimination
        let row = |h: f64| [r(1.0), (d * h.ln()).exp(), r(h)];
        let m: Vec<[Complex; 3]> = hs.iter().map(|&h| row(h)).collect();
        let extrapolated = crate::extrapolate::solve_dense(
            m.iter().map(|x| x.to_vec()).collect(),
            vals.clone(),
        )
        .unwrap()[0];
        assert!(rel(extrapolated, g) < 1e-8, "{extrapolated} vs {g}");
    }

    proptest! {
        #[test]
        fn symmetry_random(ar in -3.0f64..3.0, ai in -3.0f64..3.0, br in -3.0f64..3.0,
                           bi in -3.0f64..3.0, cr in 0.5f64..5.0, z in 0.0f64..0.99) {
            let (a, b, cc) = (c(ar, ai), c(br, bi), r(cr));
            prop_assert_eq!(hyp2f1(a, b, cc, z).unwrap(), hyp2f1(b, a, cc, z).unwrap());
        }

        #[test]
        fn pfaff_agrees_on_unit_interval(ar in -2.0f64..2.0, ai in -2.0f64..2.0,
                                         br in -2.0f64..2.0, bi in -2.0f64..2.0,
                                         cr in 0.5f64..4.0, z in 0.0f64..0.8) {
            let (a, b, cc) = (c(ar, ai), c(br, bi), c(cr, 0.3));
            let direct = hyp2f1(a, b, cc, z).unwrap();
            let pf = pfaff_transform(a, b, cc, z).unwrap();
            prop_assert!((direct - pf).norm() <= 1e-10 * direct.norm().max(1.0),
                "{} vs {}", direct, pf);
        }
    }
}
