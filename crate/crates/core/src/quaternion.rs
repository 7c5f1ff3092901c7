//! Quaternion scalars.
//!
//! A quaternion `w + x·i + y·j + z·k` with the Hamilton product
//! `ij = -ji = k`, `jk = -kj = i`, `ki = -ik = j`. Products do not commute,
//! so every caller that multiplies quaternions has to be explicit about the
//! order of the factors.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used by [`Quaternion::is_pure_unit`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Pure quaternion `x·i + y·j + z·k`.
    #[inline]
    pub const fn pure(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    /// Embeds a complex number in the `1, i` subalgebra.
    #[inline]
    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    /// Builds `a + b·j` from its two complex parts.
    #[inline]
    pub fn from_parts(a: Complex64, b: Complex64) -> Self {
        Self::new(a.re, a.im, b.re, b.im)
    }

    /// Splits `q = a + b·j` into `(a, b)` with `a = w + x·i`, `b = y + z·i`.
    #[inline]
    pub fn parts(self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.w, self.x),
            Complex64::new(self.y, self.z),
        )
    }

    #[inline]
    pub fn scalar(self) -> f64 {
        self.w
    }

    #[inline]
    pub fn vector(self) -> Self {
        Self::pure(self.x, self.y, self.z)
    }

    #[inline]
    pub fn vector_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_pure(self) -> bool {
        self.w == 0.0
    }

    pub fn is_pure_unit(self) -> bool {
        self.is_pure() && (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }

    /// `true` when the `j` and `k` coefficients vanish.
    pub fn is_complex(self) -> bool {
        self.y == 0.0 && self.z == 0.0
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroQuaternion { op: "inverse" });
        }
        Ok(self.conj() / n2)
    }

    /// `e^q = e^w (cos|v| + v/|v| sin|v|)`; the real scalar `e^w` when `v = 0`.
    pub fn exp(self) -> Self {
        let scale = self.w.exp();
        let theta = self.vector_norm();
        if theta == 0.0 {
            return Self::real(scale);
        }
        let s = scale * theta.sin() / theta;
        Self::new(scale * theta.cos(), s * self.x, s * self.y, s * self.z)
    }

    /// Principal logarithm `ln|q| + v/|v| · atan2(|v|, w)`.
    pub fn ln(self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroQuaternion { op: "log" });
        }
        let theta = self.vector_norm();
        if theta == 0.0 {
            if self.w < 0.0 {
                return Err(Error::NonPrincipalLog { value: self.w });
            }
            return Ok(Self::real(norm.ln()));
        }
        let s = theta.atan2(self.w) / theta;
        Ok(Self::new(norm.ln(), s * self.x, s * self.y, s * self.z))
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self.w - other.w)
            .abs()
            .max((self.x - other.x).abs())
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Self::from_complex(c)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(
                f,
                "{:.p$}{:+.p$}i{:+.p$}j{:+.p$}k",
                self.w, self.x, self.y, self.z
            ),
            None => write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z),
        }
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{E, FRAC_PI_2, PI};

    use proptest::prelude::*;

    use super::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn display_precision() {
        let q = Quaternion::new(1.0, -0.5, 0.25, 2.0);
        assert_eq!(q.to_string(), "1-0.5i+0.25j+2k");
        assert_eq!(format!("{q:.2}"), "1.00-0.50i+0.25j+2.00k");
    }

    #[test]
    fn unit_products() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        let q = Quaternion::new(0.3, -1.2, 2.5, 4.0);
        assert_eq!(Quaternion::ONE * q, q);
        assert_eq!(q * Quaternion::ONE, q);
    }

    #[test]
    fn conjugate_and_norm() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q.conj(), Quaternion::new(1.0, -2.0, -3.0, -4.0));
        assert_eq!(q.conj().conj(), q);
        assert_eq!(q * q.conj(), Quaternion::real(30.0));
        assert_eq!(Quaternion::new(1.0, 1.0, 1.0, 1.0).norm(), 2.0);
        assert_eq!(Quaternion::ZERO.norm(), 0.0);
        assert_eq!(Quaternion::I.norm(), 1.0);
    }

    #[test]
    fn inverse_cases() {
        assert_eq!(Quaternion::I.inverse().unwrap(), -Quaternion::I);
        assert_eq!(
            Quaternion::real(2.0).inverse().unwrap(),
            Quaternion::real(0.5)
        );
        let u = Quaternion::new(0.5, 0.5, 0.5, 0.5);
        assert!(close(u.inverse().unwrap(), u.conj(), 1e-15));
        assert!(matches!(
            Quaternion::ZERO.inverse(),
            Err(Error::ZeroQuaternion { .. })
        ));
    }

    #[test]
    fn exp_cases() {
        assert_eq!(Quaternion::ZERO.exp(), Quaternion::ONE);
        assert!(close((Quaternion::I * PI).exp(), -Quaternion::ONE, 1e-15));
        assert!(close(
            (Quaternion::J * FRAC_PI_2).exp(),
            Quaternion::J,
            1e-15
        ));
        assert_eq!(Quaternion::real(1.0).exp(), Quaternion::real(E));
    }

    #[test]
    fn log_cases() {
        assert_eq!(Quaternion::ONE.ln().unwrap(), Quaternion::ZERO);
        assert!(close(
            Quaternion::J.ln().unwrap(),
            Quaternion::J * FRAC_PI_2,
            1e-15
        ));
        assert!(close(
            Quaternion::real(E).ln().unwrap(),
            Quaternion::ONE,
            1e-15
        ));
        assert!(matches!(
            Quaternion::ZERO.ln(),
            Err(Error::ZeroQuaternion { .. })
        ));
        assert!(matches!(
            Quaternion::real(-2.0).ln(),
            Err(Error::NonPrincipalLog { .. })
        ));
    }

    #[test]
    fn log_negative_scalar_uses_obtuse_angle() {
        let q = Quaternion::new(-1.0, 0.0, 1.0, 0.0);
        let l = q.ln().unwrap();
        assert!((l.y - 3.0 * PI / 4.0).abs() < 1e-15);
        assert!(close(l.exp(), q, 1e-14));
    }

    #[test]
    fn exponent_of_sum_is_not_product_of_exponents() {
        let p = Quaternion::I * FRAC_PI_2;
        let q = Quaternion::J * FRAC_PI_2;
        assert!((p.exp() * q.exp() - (p + q).exp()).norm() > 0.1);
        assert_eq!(
            (Quaternion::I * Quaternion::J - Quaternion::J * Quaternion::I).norm(),
            2.0
        );
    }

    #[test]
    fn purity() {
        assert!(Quaternion::pure(0.0, 0.6, 0.8).is_pure_unit());
        assert!(!Quaternion::new(1e-9, 0.6, 0.8, 0.0).is_pure_unit());
        assert!(Quaternion::pure(1.0, 2.0, 3.0).is_pure());
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        (
            -10.0..10.0f64,
            -10.0..10.0f64,
            -10.0..10.0f64,
            -10.0..10.0f64,
        )
            .prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(p in quat(), q in quat()) {
            let lhs = (p * q).norm();
            let rhs = p.norm() * q.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }

        #[test]
        fn exp_inverts_log(q in quat()) {
            prop_assume!(q.vector_norm() > 0.0 || q.w > 0.0);
            let back = q.ln().unwrap().exp();
            prop_assert!(back.max_abs_diff(q) <= 1e-10 * q.norm().max(1.0));
        }

        #[test]
        fn log_inverts_exp(w in -3.0..3.0f64, dir in quat(), angle in 0.0..3.1f64) {
            prop_assume!(dir.vector_norm() > 1e-3);
            let v = dir.vector() * (angle / dir.vector_norm());
            let q = Quaternion::real(w) + v;
            prop_assert!(q.exp().ln().unwrap().max_abs_diff(q) <= 1e-10);
        }

        #[test]
        fn inverse_is_two_sided(q in quat()) {
            prop_assume!(q.norm() > 1e-3);
            let inv = q.inverse().unwrap();
            prop_assert!((q * inv).max_abs_diff(Quaternion::ONE) <= 1e-12);
            prop_assert!((inv * q).max_abs_diff(Quaternion::ONE) <= 1e-12);
        }
    }
}
