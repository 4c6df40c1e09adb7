//! Fixed-size complex 2-vectors and 2×2 matrices.
//!
//! Every linear solve in the normal-form computation is 2×2, so the inverse
//! is written out through the adjugate instead of pulling in a general
//! linear-algebra crate.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Condition-number ceiling above which a 2×2 solve is refused.
pub const MAX_CONDITION: f64 = 1e12;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Complex column vector with two entries.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVec2(pub [Complex64; 2]);

impl CVec2 {
    pub const ZERO: CVec2 = CVec2([Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);

    pub fn new(a: Complex64, b: Complex64) -> Self {
        CVec2([a, b])
    }

    pub fn from_real(a: f64, b: f64) -> Self {
        CVec2([re(a), re(b)])
    }

    #[inline]
    pub fn x(&self) -> Complex64 {
        self.0[0]
    }

    #[inline]
    pub fn y(&self) -> Complex64 {
        self.0[1]
    }

    pub fn conj(&self) -> Self {
        CVec2([self.0[0].conj(), self.0[1].conj()])
    }

    /// Plain (non-conjugating) product `selfᵀ·other`.
    pub fn dot(&self, other: &CVec2) -> Complex64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CVec2([self.0[0] * s, self.0[1] * s])
    }

    pub fn norm_inf(&self) -> f64 {
        self.0[0].norm().max(self.0[1].norm())
    }
}

impl Add for CVec2 {
    type Output = CVec2;
    fn add(self, o: CVec2) -> CVec2 {
        CVec2([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl Sub for CVec2 {
    type Output = CVec2;
    fn sub(self, o: CVec2) -> CVec2 {
        CVec2([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl Neg for CVec2 {
    type Output = CVec2;
    fn neg(self) -> CVec2 {
        CVec2([-self.0[0], -self.0[1]])
    }
}

impl Mul<Complex64> for CVec2 {
    type Output = CVec2;
    fn mul(self, s: Complex64) -> CVec2 {
        self.scale(s)
    }
}

impl Mul<f64> for CVec2 {
    type Output = CVec2;
    fn mul(self, s: f64) -> CVec2 {
        CVec2([self.0[0] * s, self.0[1] * s])
    }
}

/// Complex 2×2 matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CMat2(pub [[Complex64; 2]; 2]);

impl CMat2 {
    pub fn identity() -> Self {
        CMat2([[re(1.0), re(0.0)], [re(0.0), re(1.0)]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        CMat2([[re(m[0][0]), re(m[0][1])], [re(m[1][0]), re(m[1][1])]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn mul_vec(&self, v: &CVec2) -> CVec2 {
        let m = &self.0;
        CVec2([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    /// Row vector times matrix, `vᵀ·M`.
    pub fn vec_mul(&self, v: &CVec2) -> CVec2 {
        let m = &self.0;
        CVec2([
            v.0[0] * m[0][0] + v.0[1] * m[1][0],
            v.0[0] * m[0][1] + v.0[1] * m[1][1],
        ])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        CMat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Infinity-norm condition estimate `‖M‖∞·‖M⁻¹‖∞`.
    pub fn condition(&self) -> f64 {
        let d = self.det();
        if d.norm() == 0.0 {
            return f64::INFINITY;
        }
        let m = &self.0;
        let row = |a: Complex64, b: Complex64| a.norm() + b.norm();
        let n = row(m[0][0], m[0][1]).max(row(m[1][0], m[1][1]));
        let ninv = row(m[1][1], m[0][1]).max(row(m[1][0], m[0][0])) / d.norm();
        n * ninv
    }

    /// Solves `M x = b` through the adjugate. Refuses ill-conditioned systems.
    pub fn solve(&self, b: &CVec2) -> Result<CVec2> {
        let cond = self.condition();
        if !(cond <= MAX_CONDITION) {
            return Err(Error::SingularSolve { condition: cond });
        }
        let m = &self.0;
        let d = self.det();
        Ok(CVec2([
            (m[1][1] * b.0[0] - m[0][1] * b.0[1]) / d,
            (m[0][0] * b.0[1] - m[1][0] * b.0[0]) / d,
        ]))
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, o: CMat2) -> CMat2 {
        let (a, b) = (&self.0, &o.0);
        CMat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for CMat2 {
    type Output = CMat2;
    fn sub(self, o: CMat2) -> CMat2 {
        let (a, b) = (&self.0, &o.0);
        CMat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_round_trips() {
        let m = CMat2([[c(1.0, 2.0), c(-0.5, 0.1)], [c(0.3, 0.0), c(2.0, -1.0)]]);
        let x = CVec2::new(c(0.7, -0.2), c(-1.1, 0.4));
        let b = m.mul_vec(&x);
        let y = m.solve(&b).unwrap();
        assert!((y - x).norm_inf() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_refused() {
        let m = CMat2::from_real([[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(
            m.solve(&CVec2::from_real(1.0, 0.0)),
            Err(Error::SingularSolve { .. })
        ));
    }

    #[test]
    fn row_vector_product_matches_transpose() {
        let m = CMat2([[c(1.0, 1.0), c(2.0, 0.0)], [c(0.0, -1.0), c(3.0, 0.5)]]);
        let v = CVec2::new(c(0.2, 0.3), c(-0.4, 1.0));
        let t = CMat2([[m.0[0][0], m.0[1][0]], [m.0[0][1], m.0[1][1]]]);
        assert!((m.vec_mul(&v) - t.mul_vec(&v)).norm_inf() < 1e-15);
    }
}
