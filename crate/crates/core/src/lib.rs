//! Numerical operator dynamics on generalized Fock spaces `F^p_(α, m)`.
//!
//! Norms of entire functions, exact coefficient actions of the
//! differentiation, integration, Hardy, Volterra and `K_λ` operators,
//! probes for the growth of their iterates, and closed-form classifiers.

pub mod criteria;
pub mod dynamics;
pub mod error;
pub mod norms;
pub mod operators;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod space;
pub mod special;

pub use criteria::{classify, cross_check, Claim, Classification, Concordance, CrossCheckReport, CrossCheckSettings};
pub use dynamics::{BoundKind, NormMethod, NormSample, OrbitVerdict, Verdict};
pub use error::{Error, Result};
pub use norms::{
    operator_norm_lower, operator_norm_p2, poly_norm_p2, shift_norm_exact_p2, IndexCap, PowerNorm, ShiftNorm,
};
pub use operators::{CoeffOperator, OperatorKind, ShiftTerm, SymbolPolynomial, WeightRule};
pub use scalar::{ExactComplex, Scalar};
pub use series::TaylorSeries;
pub use space::{Exponent, SpaceParams};
