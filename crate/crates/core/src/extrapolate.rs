//! Richardson extrapolation towards `h -> 0` with known (possibly complex)
//! remainder exponents.

use crate::error::{domain, Error, Result};
use crate::Complex;

/// One remainder term `h^e` or `h^e ln h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Remainder {
    Power(Complex),
    PowerLog(Complex),
}

impl Remainder {
    fn eval(self, h: f64) -> Complex {
        match self {
            Remainder::Power(e) => (e * h.ln()).exp(),
            Remainder::PowerLog(e) => (e * h.ln()).exp() * h.ln(),
        }
    }

    fn order(self) -> f64 {
        match self {
            Remainder::Power(e) | Remainder::PowerLog(e) => e.re,
        }
    }
}

/// Picks the `count` dominant remainder terms from the two families
/// `h^1, h^2, ...` and `h^s, h^(s+1), ...`. Coinciding exponents produce a
/// logarithmic term, which is ranked ahead of the plain power.
pub fn remainder_terms(shift: Complex, count: usize) -> Vec<Remainder> {
    let mut terms = Vec::new();
    for k in 1..=count + 1 {
        let integer = Complex::new(k as f64, 0.0);
        terms.push(Remainder::Power(integer));
        let shifted = shift + (k - 1) as f64;
        if (shifted - shifted.re.round()).norm() < 1e-9 && shifted.re.round() >= 1.0 {
            terms.push(Remainder::PowerLog(Complex::new(shifted.re.round(), 0.0)));
        } else {
            terms.push(Remainder::Power(shifted));
        }
    }
    terms.retain(|t| t.order() > 0.0);
    terms.sort_by(|a, b| {
        a.order()
            .partial_cmp(&b.order())
            .unwrap()
            .then_with(|| match (a, b) {
                (Remainder::PowerLog(_), Remainder::Power(_)) => std::cmp::Ordering::Less,
                (Remainder::Power(_), Remainder::PowerLog(_)) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Equal,
            })
    });
    // a non-integer shift coinciding with an integer power is handled above;
    // drop exact duplicates that remain (e.g. shift = 1 gives h^1 twice)
    terms.dedup_by(|a, b| a == b);
    terms.truncate(count);
    terms
}

/// Dense complex linear solve with partial pivoting.
pub fn solve_dense(mut m: Vec<Vec<Complex>>, mut rhs: Vec<Complex>) -> Result<Vec<Complex>> {
    let n = rhs.len();
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(domain("solve_dense: non-square system"));
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap())
            .unwrap();
        if m[pivot][col].norm() == 0.0 {
            return Err(Error::NoConvergence {
                what: "extrapolation (singular system)",
                iterations: 0,
            });
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for (offset, target) in lower.iter_mut().enumerate() {
            let row = col + 1 + offset;
            let f = target[col] / pivot_row[col];
            for (t, &v) in target[col..].iter_mut().zip(&pivot_row[col..]) {
                *t -= f * v;
            }
            let v = rhs[col];
            rhs[row] -= f * v;
        }
    }
    let mut x = vec![Complex::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// Extrapolated `h -> 0` value of samples `values[i] = v(hs[i])`, eliminating
/// the given remainder terms. Needs `hs.len() == terms.len() + 1`.
pub fn richardson(hs: &[f64], values: &[Complex], terms: &[Remainder]) -> Result<Complex> {
    if hs.len() != values.len() || hs.len() != terms.len() + 1 {
        return Err(domain("richardson: need one more sample than remainder terms"));
    }
    if hs.iter().any(|&h| !(h > 0.0)) {
        return Err(domain("richardson: step sizes must be positive"));
    }
    let m = hs
        .iter()
        .map(|&h| {
            std::iter::once(Complex::new(1.0, 0.0))
                .chain(terms.iter().map(|t| t.eval(h)))
                .collect()
        })
        .collect();
    let x = solve_dense(m, values.to_vec())?;
    let v = x[0];
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("richardson"))
    }
}

/// Extrapolation with a stability estimate: the full estimate and the one
/// obtained from the trailing samples with one fewer remainder term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: Complex,
    pub coarser: Complex,
}

impl Extrapolated {
    pub fn stability(&self) -> f64 {
        (self.value - self.coarser).norm() / self.value.norm().max(1e-300)
    }
}

pub fn richardson_with_shift(hs: &[f64], values: &[Complex], shift: Complex) -> Result<Extrapolated> {
    let k = hs.len().saturating_sub(1);
    if k == 0 {
        return Err(domain("richardson: need at least two samples"));
    }
    let terms = remainder_terms(shift, k);
    let value = richardson(hs, values, &terms)?;
    let coarser = richardson(&hs[1..], &values[1..], &terms[..k - 1])?;
    Ok(Extrapolated { value, coarser })
}
