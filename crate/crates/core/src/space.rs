//! The weighted spaces `F^p_(alpha, m)` and closed forms for monomial norms.
//!
//! The norm of `z^n` satisfies
//!
//! ```text
//! ||z^n||^p = 2π Γ((pn + 2)/m) / (m (pα)^((pn + 2)/m))      (p finite)
//! ||z^n||   = sup_r r^n e^{-α r^m} = (n/(mα))^(n/m) e^(-n/m)  (p = ∞)
//! ```
//!
//! Everything is returned as a natural logarithm; the norms overflow `f64`
//! at a few hundred for `m = 1`.

use std::f64::consts::{E, PI};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::special::{ln_gamma, ln_gamma_q};

/// Integrability exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinite),
            other => other
                .parse::<f64>()
                .map(Exponent::Finite)
                .map_err(|_| Error::InvalidSpace(format!("cannot parse exponent {s:?}"))),
        }
    }
}

/// The triple `(p, α, m)` identifying `F^p_(α, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceParams {
    pub p: Exponent,
    pub alpha: f64,
    pub m: f64,
}

impl SpaceParams {
    pub fn new(p: Exponent, alpha: f64, m: f64) -> Result<Self> {
        if let Exponent::Finite(p) = p {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::InvalidSpace(format!("p must be >= 1, got {p}")));
            }
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidSpace(format!("alpha must be > 0, got {alpha}")));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidSpace(format!("m must be > 0, got {m}")));
        }
        Ok(Self { p, alpha, m })
    }

    /// Finite-`p` space; panics on invalid parameters.
    pub fn finite(p: f64, alpha: f64, m: f64) -> Self {
        Self::new(Exponent::Finite(p), alpha, m).expect("valid space parameters")
    }

    /// Growth space `F^∞_(α, m)`; panics on invalid parameters.
    pub fn sup(alpha: f64, m: f64) -> Self {
        Self::new(Exponent::Infinite, alpha, m).expect("valid space parameters")
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.p, self.alpha, self.m).map(|_| ())
    }

    pub(crate) fn require_finite(&self) -> Result<f64> {
        self.validate()?;
        self.p.finite().ok_or(Error::UnsupportedExponent { required: "finite p", actual: "p = inf".into() })
    }

    pub(crate) fn require_p2(&self) -> Result<()> {
        self.validate()?;
        match self.p {
            Exponent::Finite(p) if p == 2.0 => Ok(()),
            other => Err(Error::UnsupportedExponent { required: "p = 2", actual: format!("p = {other}") }),
        }
    }

    /// `m` as a positive integer, if it is one.
    pub fn integer_m(&self) -> Option<u32> {
        (self.m.fract() == 0.0 && self.m >= 1.0 && self.m <= u32::MAX as f64).then_some(self.m as u32)
    }

    /// Log-norm of `z^n` by the route matching `p`.
    pub fn monomial_log_norm(&self, n: usize) -> Result<f64> {
        match self.p {
            Exponent::Finite(_) => monomial_norm_log(self, n),
            Exponent::Infinite => monomial_norm_sup_log(self, n),
        }
    }
}

impl fmt::Display for SpaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={},alpha={},m={}", self.p, self.alpha, self.m)
    }
}

/// `ln ||z^n||_(p, α, m)` for finite `p`, from the Gamma closed form.
pub fn monomial_norm_log(space: &SpaceParams, n: usize) -> Result<f64> {
    let p = space.require_finite()?;
    let (alpha, m) = (space.alpha, space.m);
    let x = (p * n as f64 + 2.0) / m;
    Ok(((2.0 * PI).ln() + ln_gamma(x) - m.ln() - x * (p * alpha).ln()) / p)
}

/// `ln ||z^n||_(∞, α, m) = ln sup_r r^n e^{-α r^m}`.
pub fn monomial_norm_sup_log(space: &SpaceParams, n: usize) -> Result<f64> {
    space.validate()?;
    if !space.p.is_infinite() {
        return Err(Error::UnsupportedExponent { required: "p = inf", actual: format!("p = {}", space.p) });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let n = n as f64;
    let m = space.m;
    Ok(n / m * ((n / (m * space.alpha)).ln() - 1.0))
}

/// `(n/m + 2/(mp) - 1/(2p)) ln(n/(m e α))`, the leading-order growth of the
/// monomial norms. Used for ratio diagnostics only.
pub fn monomial_norm_asymptotic_log(space: &SpaceParams, n: usize) -> Result<f64> {
    let p = space.require_finite()?;
    if n == 0 {
        return Err(Error::InvalidArgument("asymptotic form needs n >= 1".into()));
    }
    let (alpha, m) = (space.alpha, space.m);
    let n = n as f64;
    Ok((n / m + 2.0 / (m * p) - 1.0 / (2.0 * p)) * (n / (m * E * alpha)).ln())
}

/// Radius beyond which the highest-degree contribution is negligible.
///
/// Finite `p`: the mass of `r^(p·degree+1) e^{-pα r^m}` on `[R, ∞)` is below
/// `eps` times its total. `p = ∞`: `r^degree e^{-α r^m}` has dropped below
/// `eps` times its peak value. Search starts at the peak and inflates
/// geometrically; each candidate is verified by the exact tail formula.
pub fn tail_radius(space: &SpaceParams, degree: usize, eps: f64) -> Result<f64> {
    space.validate()?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps must be in (0, 1), got {eps}")));
    }
    const GROWTH: f64 = 1.05;
    let m = space.m;
    let ln_eps = eps.ln();
    match space.p {
        Exponent::Finite(p) => {
            let a = p * degree as f64 + 1.0;
            let b = p * space.alpha;
            let shape = (a + 1.0) / m;
            let mut r = (a / (b * m)).powf(1.0 / m);
            while ln_gamma_q(shape, b * r.powf(m)) >= ln_eps {
                r *= GROWTH;
            }
            Ok(r)
        }
        Exponent::Infinite => {
            let d = degree as f64;
            let alpha = space.alpha;
            let log_weighted = |r: f64| {
                if d == 0.0 {
                    -alpha * r.powf(m)
                } else {
                    d * r.ln() - alpha * r.powf(m)
                }
            };
            let mut r = (d / (alpha * m)).powf(1.0 / m);
            let peak = if d == 0.0 { 0.0 } else { log_weighted(r) };
            if r == 0.0 {
                r = (1.0 / alpha).powf(1.0 / m);
            }
            while log_weighted(r) - peak >= ln_eps {
                r *= GROWTH;
            }
            Ok(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_space_constants() {
        let s = SpaceParams::finite(2.0, 0.5, 2.0);
        assert!((monomial_norm_log(&s, 0).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
        let expected = 0.5 * (6.0 * PI).ln();
        assert!((monomial_norm_log(&s, 3).unwrap() - expected).abs() < 1e-14);
        assert!((monomial_norm_log(&s, 3).unwrap() - 1.468245).abs() < 1e-5);
    }

    #[test]
    fn l1_exponential_weight_constant() {
        let s = SpaceParams::finite(1.0, 1.0, 1.0);
        assert!((monomial_norm_log(&s, 0).unwrap() - (2.0 * PI).ln()).abs() < 1e-14);
    }

    #[test]
    fn sup_closed_forms() {
        let s = SpaceParams::sup(1.0, 1.0);
        assert_eq!(monomial_norm_sup_log(&s, 0).unwrap(), 0.0);
        assert!((monomial_norm_sup_log(&s, 1).unwrap() + 1.0).abs() < 1e-15);
        let g = SpaceParams::sup(0.5, 2.0);
        assert!((monomial_norm_sup_log(&g, 2).unwrap() - (2.0 / E).ln()).abs() < 1e-14);
    }

    #[test]
    fn exponent_mismatch_is_rejected() {
        let s = SpaceParams::sup(1.0, 1.0);
        assert!(monomial_norm_log(&s, 1).is_err());
        assert!(monomial_norm_sup_log(&SpaceParams::finite(2.0, 1.0, 1.0), 1).is_err());
        assert!(monomial_norm_asymptotic_log(&s, 1).is_err());
    }

    #[test]
    fn invalid_parameters() {
        assert!(SpaceParams::new(Exponent::Finite(0.5), 1.0, 1.0).is_err());
        assert!(SpaceParams::new(Exponent::Finite(2.0), 0.0, 1.0).is_err());
        assert!(SpaceParams::new(Exponent::Finite(2.0), 1.0, -1.0).is_err());
        assert!(SpaceParams::new(Exponent::Finite(f64::NAN), 1.0, 1.0).is_err());
        assert!("inf".parse::<Exponent>().unwrap().is_infinite());
        assert!("x".parse::<Exponent>().is_err());
    }

    #[test]
    fn asymptotic_direct_substitution() {
        let s = SpaceParams::finite(2.0, 1.0, 1.0);
        assert!((monomial_norm_asymptotic_log(&s, 1).unwrap() + 1.75).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_gap_is_bounded() {
        for (s, n) in [(SpaceParams::finite(2.0, 1.0, 1.0), 100), (SpaceParams::finite(2.0, 0.5, 2.0), 50)] {
            let gap = monomial_norm_log(&s, n).unwrap() - monomial_norm_asymptotic_log(&s, n).unwrap();
            assert!(gap.abs() <= 2.0, "{s}: gap {gap}");
        }
    }

    #[test]
    fn tail_radius_gaussian_degree_zero() {
        // Tail fraction of r e^{-r^2} beyond R is e^{-R^2}.
        let s = SpaceParams::finite(2.0, 0.5, 2.0);
        let r = tail_radius(&s, 0, 1e-12).unwrap();
        assert!((-r * r) < 1e-12f64.ln());
        assert!(r > 5.25 && r < 7.0, "R = {r}");
    }

    #[test]
    fn tail_radius_monotone() {
        let s = SpaceParams::finite(2.0, 1.0, 1.0);
        let mut last = 0.0;
        for d in [0, 1, 5, 20, 60] {
            let r = tail_radius(&s, d, 1e-12).unwrap();
            assert!(r >= last);
            last = r;
        }
        assert!(tail_radius(&s, 5, 1e-14).unwrap() > tail_radius(&s, 5, 1e-6).unwrap());
    }
}
