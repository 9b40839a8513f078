//! Complex 2-vectors and 2×2 matrices.
//!
//! Everything in a single-antenna polarized link lives in two dimensions
//! (vertical, horizontal), so these are plain `Copy` structs with the handful
//! of products the solvers need.

use core::ops::{Add, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const J: C64 = C64::new(0.0, 1.0);

/// Column vector `[e0, e1]ᵀ` in the (vertical, horizontal) basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVec2 {
    pub e0: C64,
    pub e1: C64,
}

impl CVec2 {
    pub const fn new(e0: C64, e1: C64) -> Self {
        Self { e0, e1 }
    }

    pub const fn real(e0: f64, e1: f64) -> Self {
        Self::new(C64::new(e0, 0.0), C64::new(e1, 0.0))
    }

    /// Hermitian inner product `selfᴴ · other`.
    pub fn dot_h(&self, other: &CVec2) -> C64 {
        self.e0.conj() * other.e0 + self.e1.conj() * other.e1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.e0.norm_sqr() + self.e1.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn conj(&self) -> CVec2 {
        CVec2::new(self.e0.conj(), self.e1.conj())
    }

    pub fn scale(&self, a: C64) -> CVec2 {
        CVec2::new(self.e0 * a, self.e1 * a)
    }

    /// Outer product `self · otherᴴ`.
    pub fn outer_h(&self, other: &CVec2) -> CMat2 {
        CMat2::new(
            self.e0 * other.e0.conj(),
            self.e0 * other.e1.conj(),
            self.e1 * other.e0.conj(),
            self.e1 * other.e1.conj(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.e0.is_finite() && self.e1.is_finite()
    }
}

impl Add for CVec2 {
    type Output = CVec2;
    fn add(self, rhs: CVec2) -> CVec2 {
        CVec2::new(self.e0 + rhs.e0, self.e1 + rhs.e1)
    }
}

impl Sub for CVec2 {
    type Output = CVec2;
    fn sub(self, rhs: CVec2) -> CVec2 {
        CVec2::new(self.e0 - rhs.e0, self.e1 - rhs.e1)
    }
}

impl Neg for CVec2 {
    type Output = CVec2;
    fn neg(self) -> CVec2 {
        CVec2::new(-self.e0, -self.e1)
    }
}

/// Row-major 2×2 complex matrix `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CMat2 {
    pub m11: C64,
    pub m12: C64,
    pub m21: C64,
    pub m22: C64,
}

impl CMat2 {
    pub const fn new(m11: C64, m12: C64, m21: C64, m22: C64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub const fn real(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Self::new(
            C64::new(m11, 0.0),
            C64::new(m12, 0.0),
            C64::new(m21, 0.0),
            C64::new(m22, 0.0),
        )
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zeros() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(d1: C64, d2: C64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat2 {
        CMat2::new(self.m11.conj(), self.m21.conj(), self.m12.conj(), self.m22.conj())
    }

    pub fn mul_vec(&self, v: &CVec2) -> CVec2 {
        CVec2::new(
            self.m11 * v.e0 + self.m12 * v.e1,
            self.m21 * v.e0 + self.m22 * v.e1,
        )
    }

    /// `selfᴴ · v` without materializing the adjoint.
    pub fn adjoint_mul_vec(&self, v: &CVec2) -> CVec2 {
        CVec2::new(
            self.m11.conj() * v.e0 + self.m21.conj() * v.e1,
            self.m12.conj() * v.e0 + self.m22.conj() * v.e1,
        )
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &CMat2) -> CMat2 {
        CMat2::new(
            self.m11 * other.m11,
            self.m12 * other.m12,
            self.m21 * other.m21,
            self.m22 * other.m22,
        )
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.m11.norm_sqr() + self.m12.norm_sqr() + self.m21.norm_sqr() + self.m22.norm_sqr()
    }

    pub fn scale(&self, a: C64) -> CMat2 {
        CMat2::new(self.m11 * a, self.m12 * a, self.m21 * a, self.m22 * a)
    }

    /// Hermitian check with an absolute entrywise tolerance.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        libm::fabs(self.m11.im) <= tol
            && libm::fabs(self.m22.im) <= tol
            && (self.m21 - self.m12.conj()).norm() <= tol
    }

    /// `vᴴ · self · v`.
    pub fn quad_form(&self, v: &CVec2) -> C64 {
        v.dot_h(&self.mul_vec(v))
    }

    pub fn is_finite(&self) -> bool {
        self.m11.is_finite() && self.m12.is_finite() && self.m21.is_finite() && self.m22.is_finite()
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    fn mul(self, rhs: CMat2) -> CMat2 {
        CMat2::new(
            self.m11 * rhs.m11 + self.m12 * rhs.m21,
            self.m11 * rhs.m12 + self.m12 * rhs.m22,
            self.m21 * rhs.m11 + self.m22 * rhs.m21,
            self.m21 * rhs.m12 + self.m22 * rhs.m22,
        )
    }
}

impl Mul<CVec2> for CMat2 {
    type Output = CVec2;
    fn mul(self, rhs: CVec2) -> CVec2 {
        self.mul_vec(&rhs)
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, rhs: CMat2) -> CMat2 {
        CMat2::new(self.m11 + rhs.m11, self.m12 + rhs.m12, self.m21 + rhs.m21, self.m22 + rhs.m22)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn adjoint_mul_matches_explicit_adjoint() {
        let m = CMat2::new(c(1.0, 2.0), c(-0.5, 0.3), c(0.1, -1.1), c(2.0, 0.0));
        let v = CVec2::new(c(0.3, -0.2), c(1.5, 0.7));
        let a = m.adjoint_mul_vec(&v);
        let b = m.adjoint().mul_vec(&v);
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn outer_product_is_hermitian_and_rank_one() {
        let v = CVec2::new(c(0.3, -0.2), c(1.5, 0.7));
        let w = v.outer_h(&v);
        assert!(w.is_hermitian(1e-15));
        let det = w.m11 * w.m22 - w.m12 * w.m21;
        assert!(det.norm() < 1e-14);
        assert!((w.quad_form(&v).re - v.norm_sqr() * v.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn hermitian_check_rejects_asymmetric() {
        let m = CMat2::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0));
        assert!(!m.is_hermitian(1e-9));
        let h = CMat2::new(c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0));
        assert!(h.is_hermitian(1e-9));
    }
}
