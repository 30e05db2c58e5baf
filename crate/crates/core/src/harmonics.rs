//! Peter-Weyl K-types `(p, q)` and the zonal spherical harmonics on the
//! boundary sphere, in the coordinates
//! `w_1 = cos(xi) (cos(phi) + y sin(phi))`, `w_j = eta_j sin(xi)`.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quaternion::{HVector, Quaternion};
use crate::special::{gegenbauer_c1, terminating_2f1_real};

/// A K-type `(p, q)` with `q - p` a nonnegative even integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct KTypeIndex {
    p: u32,
    q: u32,
}

impl KTypeIndex {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        let valid = p >= 0 && q >= p && (q - p) % 2 == 0 && q <= u32::MAX as i64;
        if !valid {
            return Err(Error::InvalidKType { p, q });
        }
        Ok(KTypeIndex { p: p as u32, q: q as u32 })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn q(self) -> u32 {
        self.q
    }

    /// `(q - p) / 2`, the degree of the radial polynomial.
    pub fn half_gap(self) -> u32 {
        (self.q - self.p) / 2
    }
}

impl TryFrom<(i64, i64)> for KTypeIndex {
    type Error = Error;
    fn try_from((p, q): (i64, i64)) -> Result<Self> {
        KTypeIndex::new(p, q)
    }
}

impl From<KTypeIndex> for (i64, i64) {
    fn from(k: KTypeIndex) -> Self {
        (k.p as i64, k.q as i64)
    }
}

impl std::fmt::Display for KTypeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// All K-types with `q <= max_degree`, in lexicographic order.
pub fn ktype_enumerate(max_degree: u32) -> Vec<KTypeIndex> {
    (0..=max_degree)
        .flat_map(|p| (p..=max_degree).step_by(2).map(move |q| KTypeIndex { p, q }))
        .collect()
}

/// A point of the boundary sphere in `H^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub xi: f64,
    pub phi: f64,
    /// Purely imaginary unit quaternion.
    pub y: Quaternion,
    /// Unit vector in `H^(n-1)`.
    pub eta: HVector,
}

impl BoundaryPoint {
    pub fn new(xi: f64, phi: f64, y: Quaternion, eta: HVector) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&xi) || !(0.0..=std::f64::consts::PI).contains(&phi) {
            return Err(domain(format!("(xi, phi) = ({xi}, {phi}) outside [0, pi/2] x [0, pi]")));
        }
        if y.w != 0.0 || (y.norm() - 1.0).abs() > 1e-12 {
            return Err(domain("y must be a purely imaginary unit quaternion"));
        }
        if eta.dim() == 0 || (eta.norm() - 1.0).abs() > 1e-12 {
            return Err(domain("eta must be a unit vector in H^(n-1)"));
        }
        Ok(BoundaryPoint { xi, phi, y, eta })
    }

    /// The point with the given angles and fixed `y = i`, `eta = e_1`.
    pub fn from_angles(n: u32, xi: f64, phi: f64) -> Result<Self> {
        if n < 2 {
            return Err(domain("boundary points need n >= 2"));
        }
        BoundaryPoint::new(xi, phi, Quaternion::I, HVector::axis(n as usize - 1, 1.0))
    }

    /// Same angles, random `y` and `eta`.
    pub fn random_fiber<R: Rng + ?Sized>(rng: &mut R, n: u32, xi: f64, phi: f64) -> Result<Self> {
        let y = Quaternion::random_imaginary_unit(rng);
        let eta = HVector::random_unit(rng, n as usize - 1);
        BoundaryPoint::new(xi, phi, y, eta)
    }

    pub fn dim(&self) -> usize {
        self.eta.dim() + 1
    }

    /// The point as a vector in `H^n`.
    pub fn to_hvector(&self) -> HVector {
        let first = (Quaternion::real(self.phi.cos()) + self.y * self.phi.sin()) * self.xi.cos();
        let mut coords = Vec::with_capacity(self.dim());
        coords.push(first);
        coords.extend(self.eta.coords.iter().map(|&e| e * self.xi.sin()));
        HVector::new(coords)
    }
}

/// Radial factor as a function of `t = cos(xi)`:
/// `t^q 2F1(-(q-p)/2, -(p+q+2)/2; 2n-2; -tan^2 xi)`.
///
/// For `t^2 < 1/2` the Pfaff-transformed polynomial
/// `t^p 2F1(-(q-p)/2, (p+q)/2+2n-1; 2n-2; 1-t^2)` is used, which is also the
/// definition at `xi = pi/2`.
pub fn radial_profile(kt: KTypeIndex, n: u32, t: f64) -> f64 {
    let big_n = kt.half_gap();
    let c = (2 * n - 2) as f64;
    let (p, q) = (kt.p as f64, kt.q as f64);
    let t2 = t * t;
    if t2 >= 0.5 {
        let tan2 = (1.0 - t2) / t2;
        t.powi(kt.q as i32) * terminating_2f1_real(big_n, -(p + q + 2.0) / 2.0, c, -tan2)
    } else {
        t.powi(kt.p as i32) * terminating_2f1_real(big_n, (p + q) / 2.0 + c + 1.0, c, 1.0 - t2)
    }
}

/// `phi_{p,q}` from `cos(xi)` and `cos(phi)`.
pub fn zonal_from_cosines(kt: KTypeIndex, n: u32, cos_xi: f64, cos_phi: f64) -> f64 {
    gegenbauer_c1(kt.p, cos_phi) * radial_profile(kt, n, cos_xi) / (kt.p + 1) as f64
}

/// The zonal harmonic `phi_{p,q}` at a boundary point. Depends only on
/// `(xi, phi)`.
pub fn zonal_harmonic(kt: KTypeIndex, n: u32, pt: &BoundaryPoint) -> Result<f64> {
    if n < 2 {
        return Err(domain("zonal harmonics need n >= 2"));
    }
    if pt.dim() != n as usize {
        return Err(domain(format!("boundary point lies in H^{}, not H^{n}", pt.dim())));
    }
    let cos_xi = if pt.xi == FRAC_PI_2 { 0.0 } else { pt.xi.cos() };
    Ok(zonal_from_cosines(kt, n, cos_xi, pt.phi.cos()))
}
