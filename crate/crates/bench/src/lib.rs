//! Inputs shared by the benchmarks.

use fockdyn::TaylorSeries;
use num_complex::Complex64;

/// Degree-`n` polynomial with unit-modulus coefficients of varying phase.
pub fn phased_polynomial(n: usize) -> TaylorSeries {
    TaylorSeries::new((0..=n).map(|k| Complex64::from_polar(1.0, 0.7 * k as f64)).collect())
}
