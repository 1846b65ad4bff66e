//! Coefficient fields for Taylor series.
//!
//! Operators act on coefficients through integer ratios (`k`, `1/(k+1)`,
//! `j/(k+j)`), so the same code runs in floating point for norms and in exact
//! rational arithmetic for the closed-form iterate checks.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Complex numbers with exact rational parts.
pub type ExactComplex = Complex<BigRational>;

pub trait Scalar:
    Clone + Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + Zero
{
    /// The real number `num / den`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Nearest double-precision complex value.
    fn to_c64(&self) -> Complex64;
}

impl Scalar for Complex64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl Scalar for ExactComplex {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// Exact complex number `re_num/re_den + i * im_num/im_den`.
pub fn exact(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> ExactComplex {
    Complex::new(
        BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
        BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_round_trip() {
        let x = ExactComplex::from_ratio(3, 4);
        assert_eq!(x.to_c64(), Complex64::new(0.75, 0.0));
        assert_eq!(Complex64::from_ratio(-1, 8), Complex64::new(-0.125, 0.0));
        assert_eq!(exact(1, 2, -1, 3).to_c64().im, -1.0 / 3.0);
    }
}
