//! Complex gamma via the Lanczos approximation (g = 7, nine terms) with
//! reflection for `Re z < 1/2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::nonpositive_integer;
use crate::Complex;

/// Distance from a nonpositive integer below which `complex_gamma` reports a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos(z: Complex) -> Complex {
    // Gamma(z) for Re z >= 1/2, written as Gamma(w + 1) with w = z - 1.
    let w = z - 1.0;
    let mut series = Complex::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (w + i as f64);
    }
    let t = w + LANCZOS_G + 0.5;
    let log_part = (w + 0.5) * t.ln() - t;
    (2.0 * PI).sqrt() * log_part.exp() * series
}

fn sin_pi(x: f64) -> f64 {
    // reduce first so that sin(pi x) is exact at integers
    let r = x - 2.0 * (x / 2.0).round();
    (PI * r).sin()
}

fn cos_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    (PI * r).cos()
}

/// `sin(pi z)` for complex `z`.
fn complex_sin_pi(z: Complex) -> Complex {
    let y = PI * z.im;
    Complex::new(sin_pi(z.re) * y.cosh(), cos_pi(z.re) * y.sinh())
}

/// Gamma function of a complex argument.
pub fn complex_gamma(z: Complex) -> Result<Complex> {
    if nonpositive_integer(z, POLE_TOLERANCE).is_some() {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    let value = if z.re < 0.5 {
        PI / (complex_sin_pi(z) * lanczos(1.0 - z))
    } else {
        lanczos(z)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("complex_gamma"))
    }
}

/// `1 / Gamma(z)`, which is entire: zero at the poles of gamma.
pub fn recip_gamma(z: Complex) -> Result<Complex> {
    if nonpositive_integer(z, POLE_TOLERANCE).is_some() {
        return Ok(Complex::new(0.0, 0.0));
    }
    complex_gamma(z).map(|g| 1.0 / g)
}
