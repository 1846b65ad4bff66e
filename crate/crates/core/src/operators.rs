//! Coefficient-space realizations of the differentiation, integration,
//! Hardy and Volterra-type operators.
//!
//! Each operator is a finite sum of weighted shifts `z^k ↦ w_k z^{k+s}`.
//! Weights are integer ratios applied through [`Scalar::from_ratio`], so the
//! action on polynomials is exact in [`ExactComplex`](crate::ExactComplex)
//! arithmetic and correctly rounded per step in `f64`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TaylorSeries;
use crate::special::ln_gamma;

/// A polynomial symbol `g(z) = a_l z^l + ... + a_1 z + a_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPolynomial<T = Complex64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> SymbolPolynomial<T> {
    /// Coefficients in increasing degree; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `a z^l`.
    pub fn monomial(l: usize, a: T) -> Self {
        let mut coeffs = vec![T::zero(); l + 1];
        coeffs[l] = a;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> T {
        self.coeffs.get(j).cloned().unwrap_or_else(T::zero)
    }

    /// Degree `l`; zero for constants (including the zero symbol).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// True for `g(z) = a z^l + b`.
    pub fn is_monomial_plus_constant(&self) -> bool {
        let l = self.degree();
        l <= 1 || self.coeffs[1..l].iter().all(|c| c.is_zero())
    }
}

impl SymbolPolynomial<Complex64> {
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }
}

/// Coefficient rule of one weighted shift.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule<T = Complex64> {
    /// `w_k = k`, shift `-1`.
    Derivative,
    /// `w_k = 1/(k+1)`, shift `+1`.
    Integration,
    /// `w_k = 1/(k+1)`, shift `0`.
    Hardy,
    /// `w_k = j a_j / (k + j)`, shift `+j`: the contribution of `a_j z^j` to
    /// `V_g`.
    Volterra { j: usize, coeff: T },
}

/// `z^k ↦ w_k z^{k + shift}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftTerm<T = Complex64> {
    pub shift: isize,
    pub weight: WeightRule<T>,
}

impl<T: Scalar> ShiftTerm<T> {
    pub fn derivative() -> Self {
        Self { shift: -1, weight: WeightRule::Derivative }
    }

    pub fn integration() -> Self {
        Self { shift: 1, weight: WeightRule::Integration }
    }

    pub fn hardy() -> Self {
        Self { shift: 0, weight: WeightRule::Hardy }
    }

    pub fn volterra(j: usize, coeff: T) -> Self {
        Self { shift: j as isize, weight: WeightRule::Volterra { j, coeff } }
    }

    pub fn weight(&self, k: usize) -> T {
        match &self.weight {
            WeightRule::Derivative => T::from_ratio(k as i64, 1),
            WeightRule::Integration | WeightRule::Hardy => T::from_ratio(1, k as i64 + 1),
            WeightRule::Volterra { j, coeff } => coeff.clone() * T::from_ratio(*j as i64, (k + j) as i64),
        }
    }

    /// Index `k + shift`, if it is a valid degree and the weight is nonzero.
    fn target(&self, k: usize) -> Option<usize> {
        let t = k as isize + self.shift;
        (t >= 0 && !(k == 0 && matches!(self.weight, WeightRule::Derivative))).then_some(t as usize)
    }

    fn abs_coeff(&self) -> f64 {
        match &self.weight {
            WeightRule::Volterra { coeff, .. } => coeff.to_c64().norm(),
            _ => 1.0,
        }
    }

    /// `ln Π_{i<n} |w_{k + i·shift}|`: the modulus of the coefficient that
    /// `n` applications of this term put on `z^k`. `None` when the chain
    /// hits a zero weight or a negative degree.
    pub fn log_abs_chain(&self, k: usize, n: usize) -> Option<f64> {
        if n == 0 {
            return Some(0.0);
        }
        const DIRECT: usize = 48;
        let kf = k as f64;
        let nf = n as f64;
        match &self.weight {
            WeightRule::Derivative => {
                if k < n {
                    return None;
                }
                if n <= DIRECT {
                    Some((0..n).map(|i| ((k - i) as f64).ln()).sum())
                } else {
                    Some(ln_gamma(kf + 1.0) - ln_gamma(kf - nf + 1.0))
                }
            }
            WeightRule::Integration => {
                if n <= DIRECT {
                    Some(-(1..=n).map(|i| ((k + i) as f64).ln()).sum::<f64>())
                } else {
                    Some(ln_gamma(kf + 1.0) - ln_gamma(kf + nf + 1.0))
                }
            }
            WeightRule::Hardy => Some(-nf * (kf + 1.0).ln()),
            WeightRule::Volterra { j, .. } => {
                let a = self.abs_coeff();
                if a == 0.0 {
                    return None;
                }
                let jf = *j as f64;
                let ratio = if n <= DIRECT {
                    -(1..=n).map(|i| (i as f64 + kf / jf).ln()).sum::<f64>()
                } else {
                    ln_gamma(kf / jf + 1.0) - ln_gamma(kf / jf + nf + 1.0)
                };
                Some(nf * a.ln() + ratio)
            }
        }
    }

    /// `(e, c)` with `ln |w_k| = e ln k + c + o(1)` as `k → ∞`.
    pub fn weight_asymptotics(&self) -> (f64, f64) {
        match &self.weight {
            WeightRule::Derivative => (1.0, 0.0),
            WeightRule::Integration | WeightRule::Hardy => (-1.0, 0.0),
            WeightRule::Volterra { j, .. } => (-1.0, (*j as f64 * self.abs_coeff()).ln()),
        }
    }
}

/// A finite sum of weighted shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffOperator<T = Complex64> {
    pub name: String,
    pub terms: Vec<ShiftTerm<T>>,
}

impl<T: Scalar> CoeffOperator<T> {
    pub fn differentiation() -> Self {
        Self { name: "D".into(), terms: vec![ShiftTerm::derivative()] }
    }

    pub fn integration() -> Self {
        Self { name: "J".into(), terms: vec![ShiftTerm::integration()] }
    }

    pub fn hardy() -> Self {
        Self { name: "H".into(), terms: vec![ShiftTerm::hardy()] }
    }

    /// `V_g f(z) = ∫_0^z g'(w) f(w) dw`. A constant symbol gives the zero
    /// operator (no terms).
    pub fn volterra(g: &SymbolPolynomial<T>) -> Self {
        let terms = g
            .coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, a)| ShiftTerm::volterra(j, a.clone()))
            .collect();
        let coeffs: Vec<String> = g.coeffs().iter().map(|c| format!("{:?}", c.to_c64())).collect();
        Self { name: format!("V[{}]", coeffs.join(",")), terms }
    }

    pub fn is_zero_operator(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn single_term(&self) -> Option<&ShiftTerm<T>> {
        match self.terms.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn max_shift(&self) -> isize {
        self.terms.iter().map(|t| t.shift).max().unwrap_or(0)
    }

    pub fn min_shift(&self) -> isize {
        self.terms.iter().map(|t| t.shift).min().unwrap_or(0)
    }

    /// Exact action on a polynomial.
    pub fn apply(&self, f: &TaylorSeries<T>) -> TaylorSeries<T> {
        if f.is_zero() || self.terms.is_empty() {
            return TaylorSeries::zero();
        }
        let len = (f.degree() as isize + self.max_shift().max(0) + 1) as usize;
        let mut out = vec![T::zero(); len];
        for (k, a) in f.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for term in &self.terms {
                if let Some(t) = term.target(k) {
                    out[t] = out[t].clone() + term.weight(k) * a.clone();
                }
            }
        }
        TaylorSeries::new(out)
    }

    /// `T^n f` by repeated exact application.
    pub fn iterate_apply(&self, n: usize, f: &TaylorSeries<T>) -> TaylorSeries<T> {
        (0..n).fold(f.clone(), |acc, _| self.apply(&acc))
    }
}

/// `H^n f = Σ a_k z^k / (k+1)^n`, computed directly.
pub fn hardy_iterate_closed<T: Scalar>(n: u32, f: &TaylorSeries<T>) -> TaylorSeries<T> {
    TaylorSeries::new(f.coeffs().iter().enumerate().map(|(k, a)| a.clone() * recip_pow::<T>(k as u64 + 1, n)).collect())
}

/// `1 / base^n` by squaring; exact for rational scalars.
fn recip_pow<T: Scalar>(base: u64, mut n: u32) -> T {
    let mut acc = T::from_ratio(1, 1);
    let mut b = T::from_ratio(1, base as i64);
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        n >>= 1;
    }
    acc
}

/// A single term `c z^degree` with `c` stored as log-modulus and phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomialImage {
    pub degree: usize,
    pub log_abs: f64,
    pub phase: f64,
}

impl MonomialImage {
    pub fn coefficient(&self) -> Complex64 {
        Complex64::from_polar(self.log_abs.exp(), self.phase)
    }
}

/// `V^n_{a z^l}(z^k) = a^n l^n z^{ln+k} / Π_{j=1..n} (jl + k)`.
pub fn volterra_monomial_iterate_closed(a: Complex64, l: usize, n: usize, k: usize) -> MonomialImage {
    let (lf, kf) = (l as f64, k as f64);
    let denom: f64 = (1..=n).map(|j| (j as f64 * lf + kf).ln()).sum();
    MonomialImage {
        degree: l * n + k,
        log_abs: n as f64 * (a.norm().ln() + lf.ln()) - denom,
        phase: n as f64 * a.arg(),
    }
}

/// Truncated Taylor series of
/// `K_λ f(z) = a m e^{λ z^m} ∫_0^z e^{-λ w^m} w^{m-1} f(w) dw` up to degree
/// `max_degree`.
///
/// The factors are truncated at the degrees that still determine every output
/// coefficient up to `max_degree`, so all returned coefficients are exact.
pub fn k_lambda_apply<T: Scalar>(
    a: &T,
    lambda: &T,
    m: u32,
    f: &TaylorSeries<T>,
    max_degree: usize,
) -> Result<TaylorSeries<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("K_lambda needs a positive integer m".into()));
    }
    let m = m as usize;
    if max_degree < f.degree() + m {
        return Err(Error::InvalidArgument(format!(
            "truncation degree {max_degree} is below deg f + m = {}",
            f.degree() + m
        )));
    }
    // e^{-λ w^m} w^{m-1}, to degree max_degree - 1
    let minus_lambda = -lambda.clone();
    let mut inner = vec![T::zero(); max_degree];
    let mut term = T::from_ratio(1, 1);
    let mut i = 0;
    while m * i + m - 1 < max_degree {
        if i > 0 {
            term = term * minus_lambda.clone() * T::from_ratio(1, i as i64);
        }
        inner[m * i + m - 1] = term.clone();
        i += 1;
    }
    let integrand = f.mul_truncated(&TaylorSeries::new(inner), max_degree - 1);
    let mut antiderivative = vec![T::zero(); integrand.degree() + 2];
    for (j, c) in integrand.coeffs().iter().enumerate() {
        antiderivative[j + 1] = c.clone() * T::from_ratio(1, j as i64 + 1);
    }
    let antiderivative = TaylorSeries::new(antiderivative);

    let mut outer = vec![T::zero(); max_degree + 1];
    let mut term = T::from_ratio(1, 1);
    let mut i = 0;
    while m * i <= max_degree {
        if i > 0 {
            term = term * lambda.clone() * T::from_ratio(1, i as i64);
        }
        outer[m * i] = term.clone();
        i += 1;
    }
    let scale = a.clone() * T::from_ratio(m as i64, 1);
    Ok(TaylorSeries::new(outer).mul_truncated(&antiderivative, max_degree).scale(&scale))
}

/// Operators named in experiment configurations.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    Differentiation,
    Integration,
    Hardy,
    Volterra(SymbolPolynomial),
    KLambda { a: Complex64, lambda: Complex64, m: u32 },
}

impl OperatorKind {
    /// Weighted-shift realization; `None` for `K_λ`, which is handled by
    /// [`k_lambda_apply`].
    pub fn coeff_operator(&self) -> Option<CoeffOperator> {
        match self {
            OperatorKind::Differentiation => Some(CoeffOperator::differentiation()),
            OperatorKind::Integration => Some(CoeffOperator::integration()),
            OperatorKind::Hardy => Some(CoeffOperator::hardy()),
            OperatorKind::Volterra(g) => Some(CoeffOperator::volterra(g)),
            OperatorKind::KLambda { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            OperatorKind::Differentiation => "D".into(),
            OperatorKind::Integration => "J".into(),
            OperatorKind::Hardy => "H".into(),
            OperatorKind::Volterra(g) => {
                let parts: Vec<String> = g.coeffs().iter().map(fmt_complex).collect();
                format!("V({})", parts.join(";"))
            }
            OperatorKind::KLambda { a, lambda, m } => {
                format!("K({};{};{})", fmt_complex(a), fmt_complex(lambda), m)
            }
        }
    }
}

/// Parses the notation produced by [`OperatorKind::label`]: `D`, `J`, `H`,
/// `V(g_0; g_1; ...)` and `K(a; λ; m)`. Commas may replace semicolons and
/// coefficients may be complex, as in `0.3-0.4i`.
impl std::str::FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidArgument(format!("cannot parse operator {s:?}"));
        match s.as_str() {
            "D" => return Ok(OperatorKind::Differentiation),
            "J" => return Ok(OperatorKind::Integration),
            "H" => return Ok(OperatorKind::Hardy),
            _ => {}
        }
        let head = s.chars().next().ok_or_else(bad)?;
        let args = s[1..].strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let parts: Vec<&str> = args.split([';', ',']).collect();
        match head {
            'V' => {
                let coeffs = parts.iter().map(|t| parse_complex(t)).collect::<Result<Vec<_>>>()?;
                let g = SymbolPolynomial::new(coeffs);
                if g.is_constant() {
                    return Err(Error::InvalidArgument("Volterra symbol must be a non-constant polynomial".into()));
                }
                Ok(OperatorKind::Volterra(g))
            }
            'K' => {
                let [a, lambda, m] = parts[..] else { return Err(bad()) };
                let m: u32 = m.parse().map_err(|_| bad())?;
                if m == 0 {
                    return Err(Error::InvalidArgument("K_lambda needs a positive integer m".into()));
                }
                Ok(OperatorKind::KLambda { a: parse_complex(a)?, lambda: parse_complex(lambda)?, m })
            }
            _ => Err(bad()),
        }
    }
}

/// `x`, `yi`, `x+yi` or `x-yi`.
fn parse_complex(t: &str) -> Result<Complex64> {
    let bad = || Error::InvalidArgument(format!("cannot parse coefficient {t:?}"));
    let num = |u: &str| u.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (num(&body[..i])?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => num(other)?,
    };
    Ok(Complex64::new(re, im))
}

pub(crate) fn fmt_complex(c: &Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{exact, ExactComplex};

    type Op = CoeffOperator<Complex64>;

    fn poly(c: &[f64]) -> TaylorSeries {
        TaylorSeries::from_real(c)
    }

    #[test]
    fn operator_labels_round_trip() {
        for text in ["D", "J", "H", "V(0;0.3)", "V(1;0;2.5-1i)", "K(1;0.5;2)", "K(1;0+0.5i;1)"] {
            let kind: OperatorKind = text.parse().unwrap();
            assert_eq!(kind.label(), text);
        }
        let kind: OperatorKind = "V(0, -1e-3i)".parse().unwrap();
        assert_eq!(
            kind,
            OperatorKind::Volterra(SymbolPolynomial::new(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1e-3)]))
        );
        for text in ["", "X", "V(2)", "V(0;a)", "K(1;2)", "K(1;0;0)", "D(1)"] {
            assert!(text.parse::<OperatorKind>().is_err(), "{text}");
        }
    }

    #[test]
    fn differentiation_examples() {
        let d = Op::differentiation();
        assert_eq!(d.apply(&poly(&[0.0, 0.0, 0.0, 1.0])), poly(&[0.0, 0.0, 3.0]));
        assert!(d.apply(&poly(&[1.0])).is_zero());
        assert_eq!(d.apply(&poly(&[1.0, 2.0, 1.0])), poly(&[2.0, 2.0]));
    }

    #[test]
    fn integration_examples() {
        let j = Op::integration();
        assert_eq!(j.apply(&poly(&[1.0])), poly(&[0.0, 1.0]));
        assert_eq!(j.apply(&poly(&[0.0, 0.0, 0.0, 1.0])), poly(&[0.0, 0.0, 0.0, 0.0, 0.25]));
    }

    #[test]
    fn hardy_examples() {
        let h = Op::hardy();
        assert_eq!(h.apply(&poly(&[1.0])), poly(&[1.0]));
        assert_eq!(h.apply(&poly(&[1.0, 2.0, 3.0])), poly(&[1.0, 1.0, 1.0]));
        let twice = h.iterate_apply(2, &poly(&[1.0, 2.0, 3.0]));
        assert_eq!(twice, poly(&[1.0, 0.5, 1.0 / 3.0]));
        assert_eq!(hardy_iterate_closed(2, &poly(&[1.0, 2.0, 3.0])), poly(&[1.0, 0.5, 1.0 / 3.0]));
        assert_eq!(hardy_iterate_closed(10, &poly(&[0.0, 1.0])), poly(&[0.0, 1.0 / 1024.0]));
        assert_eq!(h.iterate_apply(5, &poly(&[1.0, 1.0])), poly(&[1.0, 1.0 / 32.0]));
    }

    #[test]
    fn volterra_examples() {
        let v = Op::volterra(&SymbolPolynomial::from_real(&[0.0, 1.0]));
        let j = Op::integration();
        let f = poly(&[1.0, -2.0, 0.5]);
        assert_eq!(v.apply(&f), j.apply(&f));

        let v2 = Op::volterra(&SymbolPolynomial::from_real(&[0.0, 0.0, 1.0]));
        let out = v2.apply(&poly(&[0.0, 1.0]));
        assert_eq!(out.degree(), 3);
        assert!((out.coeff(3).re - 2.0 / 3.0).abs() < 1e-15);

        let v3 = Op::volterra(&SymbolPolynomial::from_real(&[5.0, 2.0, 0.0, 1.0]));
        assert_eq!(v3.apply(&poly(&[1.0])), poly(&[0.0, 2.0, 0.0, 1.0]));
    }

    #[test]
    fn constant_symbol_is_zero_operator() {
        let v = Op::volterra(&SymbolPolynomial::from_real(&[3.0]));
        assert!(v.is_zero_operator());
        assert!(v.apply(&poly(&[1.0, 1.0])).is_zero());
    }

    #[test]
    fn volterra_iterate_examples() {
        let v = Op::volterra(&SymbolPolynomial::from_real(&[0.0, 2.0]));
        let out = v.iterate_apply(3, &poly(&[1.0]));
        assert_eq!(out.degree(), 3);
        assert!((out.coeff(3).re - 4.0 / 3.0).abs() < 1e-15);

        let v = Op::volterra(&SymbolPolynomial::from_real(&[0.0, 0.0, 1.0]));
        let out = v.iterate_apply(2, &poly(&[0.0, 1.0]));
        assert_eq!(out.degree(), 5);
        assert!((out.coeff(5).re - 4.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn volterra_closed_examples() {
        let one = Complex64::new(1.0, 0.0);
        let r = volterra_monomial_iterate_closed(one, 1, 4, 0);
        assert_eq!(r.degree, 4);
        assert!((r.coefficient().re - 1.0 / 24.0).abs() < 1e-16);
        let r = volterra_monomial_iterate_closed(one, 2, 2, 1);
        assert_eq!(r.degree, 5);
        assert!((r.coefficient().re - 4.0 / 15.0).abs() < 1e-15);
        let r = volterra_monomial_iterate_closed(Complex64::new(3.0, 0.0), 1, 2, 2);
        assert_eq!(r.degree, 4);
        assert!((r.coefficient().re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn d_after_j_is_identity_exactly() {
        let f: TaylorSeries<ExactComplex> =
            TaylorSeries::new(vec![exact(1, 3, 0, 1), exact(-2, 7, 1, 2), exact(5, 1, -3, 4)]);
        let d = CoeffOperator::<ExactComplex>::differentiation();
        let j = CoeffOperator::<ExactComplex>::integration();
        assert_eq!(d.apply(&j.apply(&f)), f);
        let jd = j.apply(&d.apply(&f));
        let mut expected = f.coeffs().to_vec();
        expected[0] = exact(0, 1, 0, 1);
        assert_eq!(jd, TaylorSeries::new(expected));
    }

    #[test]
    fn k_lambda_examples() {
        let one = Complex64::new(1.0, 0.0);
        let out = k_lambda_apply(&one, &one, 1, &poly(&[1.0]), 3).unwrap();
        let expected = [0.0, 1.0, 0.5, 1.0 / 6.0];
        for (k, e) in expected.iter().enumerate() {
            assert!((out.coeff(k).re - e).abs() < 1e-15);
        }

        // f = 1: (a/λ)(e^{λ z^m} - 1), coefficient a λ^{j-1}/j! at degree jm
        let (a, lambda) = (Complex64::new(2.0, 1.0), Complex64::new(0.5, -0.25));
        let out = k_lambda_apply(&a, &lambda, 2, &poly(&[1.0]), 12).unwrap();
        let mut fact = 1.0;
        for j in 1..=6 {
            fact *= j as f64;
            let expected = a * lambda.powi(j as i32 - 1) / fact;
            assert!((out.coeff(2 * j) - expected).norm() < 1e-15);
            assert_eq!(out.coeff(2 * j - 1), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn k_lambda_rejects_bad_truncation() {
        let one = Complex64::new(1.0, 0.0);
        assert!(k_lambda_apply(&one, &one, 2, &poly(&[1.0, 1.0]), 2).is_err());
        assert!(k_lambda_apply(&one, &one, 0, &poly(&[1.0]), 5).is_err());
    }

    #[test]
    fn chain_logs_match_direct_products() {
        let terms = [
            ShiftTerm::<Complex64>::derivative(),
            ShiftTerm::integration(),
            ShiftTerm::hardy(),
            ShiftTerm::volterra(3, Complex64::new(0.0, 2.0)),
        ];
        for term in &terms {
            for &(k, n) in &[(0usize, 3usize), (7, 5), (120, 60), (300, 100)] {
                let mut direct = 0.0;
                let mut idx = k as isize;
                let mut zero = false;
                for _ in 0..n {
                    let w = term.weight(idx as usize).norm();
                    if w == 0.0 || idx < 0 {
                        zero = true;
                        break;
                    }
                    direct += w.ln();
                    idx += term.shift;
                    if idx < 0 {
                        zero = true;
                        break;
                    }
                }
                match term.log_abs_chain(k, n) {
                    None => assert!(zero, "{term:?} k={k} n={n}"),
                    Some(v) => assert!((v - direct).abs() < 1e-9 * direct.abs().max(1.0), "{term:?} k={k} n={n}"),
                }
            }
        }
    }
}
