//! Quaternions, vectors in H^n with the Hermitian pairing, and random
//! elements of the compact group Sp(n) x Sp(1).

use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.w.hypot(self.x).hypot(self.y.hypot(self.z))
    }

    /// `q / |q|`.
    pub fn unit(self) -> Result<Self> {
        let m = self.norm();
        if m == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self * (1.0 / m))
    }

    /// `Re(q / |q|)`, clamped into `[-1, 1]` against rounding.
    pub fn cos_angle(self) -> Result<f64> {
        let m = self.norm();
        if m == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok((self.w / m).clamp(-1.0, 1.0))
    }

    /// Multiplicative inverse `conj(q) / |q|^2`.
    pub fn inv(self) -> Result<Self> {
        let m = self.norm_sqr();
        if m == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.conj() * (1.0 / m))
    }

    pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }

    /// Uniform point on the unit 3-sphere.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            if let Ok(u) = Quaternion::random_gaussian(rng).unit() {
                return u;
            }
        }
    }

    /// Uniform purely imaginary unit quaternion.
    pub fn random_imaginary_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q = Quaternion::new(
                0.0,
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            );
            if let Ok(u) = q.unit() {
                return u;
            }
        }
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, t: f64) -> Self {
        Quaternion::new(self.w * t, self.x * t, self.y * t, self.z * t)
    }
}

/// A vector in `H^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HVector {
    pub coords: Vec<Quaternion>,
}

impl HVector {
    pub fn new(coords: Vec<Quaternion>) -> Self {
        HVector { coords }
    }

    pub fn zero(n: usize) -> Self {
        HVector::new(vec![Quaternion::ZERO; n])
    }

    /// `t e_1`.
    pub fn axis(n: usize, t: f64) -> Self {
        let mut v = HVector::zero(n);
        v.coords[0] = Quaternion::real(t);
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|q| q.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        HVector::new(self.coords.iter().map(|&q| q * t).collect())
    }

    /// Right scalar multiplication `v c`.
    pub fn right_mul(&self, c: Quaternion) -> Self {
        HVector::new(self.coords.iter().map(|&q| q * c).collect())
    }

    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        loop {
            let v = HVector::new((0..n).map(|_| Quaternion::random_gaussian(rng)).collect());
            let m = v.norm();
            if m > 0.0 {
                return v.scale(1.0 / m);
            }
        }
    }

    /// Uniform direction with radius drawn uniformly from `[0, max_radius]`.
    pub fn random_in_ball<R: Rng + ?Sized>(rng: &mut R, n: usize, max_radius: f64) -> Self {
        let r = rng.random::<f64>() * max_radius;
        HVector::random_unit(rng, n).scale(r)
    }
}

/// Hermitian pairing `<x, w> = sum_j conj(x_j) w_j`, right-linear in `w`.
pub fn pairing(x: &HVector, w: &HVector) -> Result<Quaternion> {
    if x.dim() != w.dim() {
        return Err(domain(format!("pairing of vectors in H^{} and H^{}", x.dim(), w.dim())));
    }
    Ok(x
        .coords
        .iter()
        .zip(&w.coords)
        .fold(Quaternion::ZERO, |acc, (&a, &b)| acc + a.conj() * b))
}

/// An element `(A, D)` of `Sp(n) x Sp(1)` acting by `v -> A v conj(D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KElement {
    /// Columns of `A`.
    pub columns: Vec<HVector>,
    pub d: Quaternion,
}

impl KElement {
    /// Haar-like random element: quaternionic Gram-Schmidt on a Gaussian
    /// matrix, and a uniform unit quaternion for `D`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let mut columns: Vec<HVector> = Vec::with_capacity(n);
        while columns.len() < n {
            let mut v = HVector::new((0..n).map(|_| Quaternion::random_gaussian(rng)).collect());
            // two passes keep orthogonality at rounding level
            for _ in 0..2 {
                for u in &columns {
                    let c = pairing(u, &v).expect("equal dimensions");
                    let proj = u.right_mul(c);
                    v = HVector::new(v.coords.iter().zip(&proj.coords).map(|(&a, &b)| a - b).collect());
                }
            }
            let m = v.norm();
            if m > 1e-8 {
                columns.push(v.scale(1.0 / m));
            }
        }
        KElement {
            columns,
            d: Quaternion::random_unit(rng),
        }
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// `A v conj(D)`.
    pub fn apply(&self, v: &HVector) -> Result<HVector> {
        if v.dim() != self.dim() {
            return Err(domain("K element and vector dimensions differ"));
        }
        let n = self.dim();
        let dbar = self.d.conj();
        let coords = (0..n)
            .map(|i| {
                let row = (0..n).fold(Quaternion::ZERO, |acc, j| acc + self.columns[j].coords[i] * v.coords[j]);
                row * dbar
            })
            .collect();
        Ok(HVector::new(coords))
    }

    /// `max |(A* A - I)_{ij}|` together with `||D| - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = (self.d.norm() - 1.0).abs();
        for i in 0..n {
            for j in 0..n {
                let g = pairing(&self.columns[i], &self.columns[j]).expect("equal dimensions");
                let target = if i == j { Quaternion::ONE } else { Quaternion::ZERO };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}
