//! Truncated Taylor series `a_0 + a_1 z + ... + a_N z^N`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::scalar::Scalar;

/// A polynomial stored by its Taylor coefficients at the origin.
///
/// Trailing zero coefficients are trimmed on construction, so `degree()` is
/// the index of the last nonzero coefficient. The zero series stores nothing
/// and reports degree 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries<T = Complex64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> TaylorSeries<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, T::from_ratio(1, 1))
    }

    /// `c * z^k`.
    pub fn monomial(k: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Some((k, a_k))` when the series is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(usize, T)> {
        let mut nonzero = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (k, c) = nonzero.next()?;
        if nonzero.next().is_some() {
            return None;
        }
        Some((k, c.clone()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Keeps the coefficients of degree `<= max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        Self::new(self.coeffs.iter().take(max_degree + 1).cloned().collect())
    }

    /// Product truncated to degree `max_degree`; coefficients up to that
    /// degree are the same as in the full product.
    pub fn mul_truncated(&self, other: &Self, max_degree: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = (self.degree() + other.degree()).min(max_degree) + 1;
        let mut out = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn to_c64(&self) -> TaylorSeries<Complex64> {
        TaylorSeries::new(self.coeffs.iter().map(Scalar::to_c64).collect())
    }
}

impl TaylorSeries<Complex64> {
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `ln |f(r e^{i theta})|`, evaluated without overflow for large `r` by
    /// running Horner in `1/z` on the reversed coefficients.
    pub fn log_abs_at(&self, r: f64, theta: f64) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if r <= 1.0 {
            return self.eval(Complex64::from_polar(r, theta)).norm().ln();
        }
        let w = Complex64::from_polar(1.0 / r, -theta);
        let g = self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c);
        self.degree() as f64 * r.ln() + g.norm().ln()
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl<T: Scalar> Add for &TaylorSeries<T> {
    type Output = TaylorSeries<T>;

    fn add(self, rhs: Self) -> TaylorSeries<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TaylorSeries::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &TaylorSeries<T> {
    type Output = TaylorSeries<T>;

    fn sub(self, rhs: Self) -> TaylorSeries<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TaylorSeries::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &TaylorSeries<T> {
    type Output = TaylorSeries<T>;

    fn mul(self, rhs: Self) -> TaylorSeries<T> {
        self.mul_truncated(rhs, self.degree() + rhs.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        let f = TaylorSeries::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(f.degree(), 1);
        assert!(TaylorSeries::<Complex64>::from_real(&[0.0, 0.0]).is_zero());
    }

    #[test]
    fn monomial_detection() {
        let f = TaylorSeries::from_real(&[0.0, 0.0, 3.0]);
        assert_eq!(f.as_monomial(), Some((2, Complex64::new(3.0, 0.0))));
        assert_eq!(TaylorSeries::from_real(&[1.0, 1.0]).as_monomial(), None);
    }

    #[test]
    fn product_and_truncation() {
        let f = TaylorSeries::from_real(&[1.0, 1.0]);
        let sq = &f * &f;
        assert_eq!(sq, TaylorSeries::from_real(&[1.0, 2.0, 1.0]));
        assert_eq!(f.mul_truncated(&f, 1), TaylorSeries::from_real(&[1.0, 2.0]));
    }

    #[test]
    fn scaled_log_evaluation_matches_direct() {
        let f = TaylorSeries::from_real(&[1.0, -2.0, 0.5, 3.0]);
        for &(r, t) in &[(0.3, 0.1), (2.5, 1.3), (40.0, -2.0)] {
            let direct = f.eval(Complex64::from_polar(r, t)).norm().ln();
            assert!((f.log_abs_at(r, t) - direct).abs() < 1e-12);
        }
        // r^300 overflows; the scaled route does not.
        let big = TaylorSeries::monomial(300, Complex64::new(1.0, 0.0));
        assert!((big.log_abs_at(1e3, 0.0) - 300.0 * 1e3f64.ln()).abs() < 1e-9);
    }
}
