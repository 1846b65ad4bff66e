//! Operator norms of powers of weighted shifts.
//!
//! On `F^2_(α, m)` the monomials are orthogonal, so in the basis
//! `e_k = z^k / ||z^k||` a single-term operator `T^n` is again a weighted
//! shift with entries
//!
//! ```text
//! entry(k) = Π_{i<n} w_{k+is} · ||z^{k+ns}|| / ||z^k||
//! ```
//!
//! and `||T^n|| = sup_k |entry(k)|`. Multi-term operators fall back to
//! finite sections, which only give lower bounds.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{CoeffOperator, ShiftTerm};
use crate::quadrature::norm_log;
use crate::series::TaylorSeries;
use crate::space::{monomial_norm_log, SpaceParams};

/// Index search policy for [`shift_norm_exact_p2`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexCap {
    pub initial: usize,
    pub cap: usize,
}

impl Default for IndexCap {
    fn default() -> Self {
        Self { initial: 64, cap: 1 << 22 }
    }
}

/// Where the supremum of the shift entries is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupLocation {
    Index(usize),
    /// Approached as `k → ∞`.
    Limit,
    /// Entries grow without bound.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftNorm {
    pub log_norm: f64,
    pub location: SupLocation,
    /// Number of indices examined.
    pub searched: usize,
    pub certified: bool,
}

/// `ln |entry(k)|` of `T^n` for one shift term; `None` for a zero entry.
pub fn shift_entry_log(space: &SpaceParams, term: &ShiftTerm, n: usize, k: usize) -> Result<Option<f64>> {
    let Some(chain) = term.log_abs_chain(k, n) else {
        return Ok(None);
    };
    let target = k as isize + n as isize * term.shift;
    if target < 0 {
        return Ok(None);
    }
    Ok(Some(chain + monomial_norm_log(space, target as usize)? - monomial_norm_log(space, k)?))
}

/// `lim_{k→∞} ln entry(k)`: `+∞` or `-∞` when the entries diverge or vanish.
pub fn shift_entry_limit(space: &SpaceParams, term: &ShiftTerm, n: usize) -> f64 {
    let (e, c) = term.weight_asymptotics();
    let (nf, s, m) = (n as f64, term.shift as f64, space.m);
    let exponent = nf * e + nf * s / m;
    if exponent.abs() < 1e-12 {
        nf * c - nf * s / m * (m * space.alpha).ln()
    } else if exponent > 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

/// Exact `ln ||T^n||` on `F^2` for a single-term operator.
///
/// The index range doubles until either the supremum has not moved for two
/// doublings while the entries decrease, or the entries rise monotonically
/// toward their finite limit for two doublings (the supremum is then the
/// limit). Hitting `cap.cap` first yields an uncertified value.
pub fn shift_norm_exact_p2(space: &SpaceParams, op: &CoeffOperator, n: usize, cap: IndexCap) -> Result<ShiftNorm> {
    space.require_p2()?;
    let term = op
        .single_term()
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not a single weighted shift", op.name)))?;
    if n == 0 {
        return Ok(ShiftNorm { log_norm: 0.0, location: SupLocation::Index(0), searched: 1, certified: true });
    }
    let limit = shift_entry_limit(space, term, n);
    if limit == f64::INFINITY {
        return Ok(ShiftNorm {
            log_norm: f64::INFINITY,
            location: SupLocation::Unbounded,
            searched: 0,
            certified: true,
        });
    }

    let mut best = f64::NEG_INFINITY;
    let mut argmax = 0;
    let scan = |lo: usize, hi: usize, best: &mut f64, argmax: &mut usize| -> Result<()> {
        for k in lo..hi {
            if let Some(v) = shift_entry_log(space, term, n, k)? {
                if v > *best {
                    *best = v;
                    *argmax = k;
                }
            }
        }
        Ok(())
    };
    let mut hi = cap.initial.max(4 * n * term.shift.unsigned_abs() + 16);
    scan(0, hi, &mut best, &mut argmax)?;

    let (mut stable, mut rising) = (0, 0);
    loop {
        if hi >= cap.cap {
            return Ok(ShiftNorm {
                log_norm: best,
                location: SupLocation::Index(argmax),
                searched: hi,
                certified: false,
            });
        }
        let next = 2 * hi;
        let previous = best;
        scan(hi, next, &mut best, &mut argmax)?;
        let samples = (0..=8)
            .map(|i| shift_entry_log(space, term, n, hi + (next - 1 - hi) * i / 8))
            .collect::<Result<Vec<_>>>()?;
        let samples: Option<Vec<f64>> = samples.into_iter().collect();
        // lgamma differences at index k carry absolute noise ~ eps * k ln k
        let tol = 1e-10 * best.abs().max(1.0) + 1e-14 * next as f64 * (next as f64).ln() * n as f64;
        if let Some(s) = samples {
            let decreasing = s.windows(2).all(|w| w[1] <= w[0] + tol);
            let increasing = s.windows(2).all(|w| w[1] >= w[0] - tol) && s[8] > s[0];
            stable = if decreasing && best <= previous + tol { stable + 1 } else { 0 };
            rising = if increasing && limit.is_finite() && s[8] <= limit + tol { rising + 1 } else { 0 };
        } else {
            stable = 0;
            rising = 0;
        }
        hi = next;
        if stable >= 2 || rising >= 2 {
            let (log_norm, location) =
                if limit > best { (limit, SupLocation::Limit) } else { (best, SupLocation::Index(argmax)) };
            return Ok(ShiftNorm { log_norm, location, searched: hi, certified: true });
        }
    }
}

/// Power-iteration settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSettings {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for PowerSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_iter: 50_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerNorm {
    /// Rayleigh-quotient estimate; a lower bound even when not converged.
    pub value: f64,
    pub iterations: usize,
    pub dimension: usize,
    pub converged: bool,
    pub last_change: f64,
}

/// The matrix of a coefficient operator in the orthonormal monomial basis
/// of `F^2`, restricted to indices below `len`.
pub(crate) struct OrthonormalShifts<'a> {
    op: &'a CoeffOperator,
    /// `factors[t][k]`: entry of term `t` from `e_k` to `e_{k+s_t}`.
    factors: Vec<Vec<Complex64>>,
    len: usize,
}

impl<'a> OrthonormalShifts<'a> {
    pub(crate) fn new(space: &SpaceParams, op: &'a CoeffOperator, len: usize) -> Result<Self> {
        let log_norms = (0..len + op.max_shift().unsigned_abs() + 2)
            .map(|k| monomial_norm_log(space, k))
            .collect::<Result<Vec<_>>>()?;
        let factors = op
            .terms
            .iter()
            .map(|t| {
                (0..len)
                    .map(|k| {
                        let target = k as isize + t.shift;
                        if target < 0 {
                            return Complex64::new(0.0, 0.0);
                        }
                        t.weight(k) * (log_norms[target as usize] - log_norms[k]).exp()
                    })
                    .collect()
            })
            .collect();
        Ok(Self { op, factors, len })
    }

    pub(crate) fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.len];
        for (t, term) in self.op.terms.iter().enumerate() {
            for (k, &xk) in x.iter().enumerate() {
                let target = k as isize + term.shift;
                if target >= 0 && (target as usize) < self.len {
                    y[target as usize] += self.factors[t][k] * xk;
                }
            }
        }
        y
    }

    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.len];
        for (t, term) in self.op.terms.iter().enumerate() {
            for k in 0..self.len {
                let target = k as isize + term.shift;
                if target >= 0 && (target as usize) < y.len() {
                    x[k] += self.factors[t][k].conj() * y[target as usize];
                }
            }
        }
        x
    }
}

/// Largest singular value of the finite section of
/// `Σ_j poly[j] T^j − P` on `span{e_0, …, e_{K-1}}` in `F^2`, where `P` is
/// the coordinate projection onto `projection`.
///
/// Power iteration on the normal matrix; the Rayleigh quotient is a lower
/// bound of the operator norm at every step, so an unconverged result is
/// still returned (with `converged == false`).
pub fn poly_norm_p2(
    space: &SpaceParams,
    op: &CoeffOperator,
    poly: &[Complex64],
    projection: &[usize],
    truncation: usize,
    settings: PowerSettings,
) -> Result<PowerNorm> {
    space.require_p2()?;
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation must be positive".into()));
    }
    let degree = poly.len().saturating_sub(1);
    let reach = op.max_shift().max(-op.min_shift()).unsigned_abs();
    let len = truncation + degree * reach + 1;
    let mat = OrthonormalShifts::new(space, op, len)?;

    let forward = |x: &[Complex64]| -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); len];
        let mut cur = x.to_vec();
        cur.resize(len, Complex64::new(0.0, 0.0));
        for (j, &c) in poly.iter().enumerate() {
            if j > 0 {
                cur = mat.apply(&cur);
            }
            if c != Complex64::new(0.0, 0.0) {
                acc.iter_mut().zip(&cur).for_each(|(a, v)| *a += c * v);
            }
        }
        for &i in projection {
            if i < x.len() {
                acc[i] -= x[i];
            }
        }
        acc
    };
    let backward = |y: &[Complex64]| -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); len];
        let mut cur = y.to_vec();
        for (j, &c) in poly.iter().enumerate() {
            if j > 0 {
                cur = mat.adjoint(&cur);
            }
            if c != Complex64::new(0.0, 0.0) {
                acc.iter_mut().zip(&cur).for_each(|(a, v)| *a += c.conj() * v);
            }
        }
        for &i in projection {
            if i < len {
                acc[i] -= y[i];
            }
        }
        acc.truncate(truncation);
        acc
    };

    let norm2 = |v: &[Complex64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let mut x = vec![Complex64::new(1.0 / (truncation as f64).sqrt(), 0.0); truncation];
    let mut estimate: f64 = 0.0;
    let mut change = f64::INFINITY;
    for iter in 1..=settings.max_iter {
        let y = forward(&x);
        let rayleigh = norm2(&y);
        let z = backward(&y);
        let zn = norm2(&z).sqrt();
        if zn == 0.0 || rayleigh == 0.0 {
            return Ok(PowerNorm {
                value: 0.0,
                iterations: iter,
                dimension: truncation,
                converged: true,
                last_change: 0.0,
            });
        }
        change = (rayleigh - estimate).abs() / rayleigh;
        estimate = estimate.max(rayleigh);
        if change <= settings.rel_tol {
            return Ok(PowerNorm {
                value: estimate.sqrt(),
                iterations: iter,
                dimension: truncation,
                converged: true,
                last_change: change,
            });
        }
        x = z.into_iter().map(|c| c / zn).collect();
    }
    Ok(PowerNorm {
        value: estimate.sqrt(),
        iterations: settings.max_iter,
        dimension: truncation,
        converged: false,
        last_change: change,
    })
}

/// Finite-section estimate of `||T||` on `F^2`; fails if power iteration
/// does not converge.
pub fn operator_norm_p2(space: &SpaceParams, op: &CoeffOperator, truncation: usize) -> Result<PowerNorm> {
    let one = Complex64::new(1.0, 0.0);
    let r = poly_norm_p2(space, op, &[Complex64::new(0.0, 0.0), one], &[], truncation, PowerSettings::default())?;
    if !r.converged {
        return Err(Error::PowerIteration { iterations: r.iterations, change: r.last_change });
    }
    Ok(r)
}

/// `ln max_f ||T^n f|| / ||f||` over a family of test vectors: a lower bound
/// of `ln ||T^n||` in any `F^p_(α, m)`.
pub fn operator_norm_lower(space: &SpaceParams, op: &CoeffOperator, n: usize, testset: &[TaylorSeries]) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for f in testset.iter().filter(|f| !f.is_zero()) {
        if let (Some(term), Some((k, _))) = (op.single_term(), f.as_monomial()) {
            // log domain: coefficients such as n! overflow f64
            if let Some(chain) = term.log_abs_chain(k, n) {
                let target = (k as isize + n as isize * term.shift) as usize;
                best = best.max(chain + space.monomial_log_norm(target)? - space.monomial_log_norm(k)?);
            }
            continue;
        }
        let image = op.iterate_apply(n, f);
        let ratio = norm_log(space, &image)? - norm_log(space, f)?;
        best = best.max(ratio);
    }
    Ok(best)
}

/// Monomials `z^0, …, z^max_degree`.
pub fn monomial_testset(max_degree: usize) -> Vec<TaylorSeries> {
    (0..=max_degree).map(|k| TaylorSeries::monomial(k, Complex64::new(1.0, 0.0))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::SymbolPolynomial;

    #[test]
    fn hardy_powers_have_norm_one() {
        let h = CoeffOperator::hardy();
        for space in [SpaceParams::finite(2.0, 0.5, 2.0), SpaceParams::finite(2.0, 3.0, 0.7)] {
            for n in [1, 2, 7, 40] {
                let r = shift_norm_exact_p2(&space, &h, n, IndexCap::default()).unwrap();
                assert!(r.certified);
                assert_eq!(r.log_norm, 0.0);
                assert_eq!(r.location, SupLocation::Index(0));
            }
        }
    }

    #[test]
    fn integration_norm_on_exponential_weight() {
        // entry(k) = sqrt((2k+3)/(2k+2)), maximal at k = 0.
        let space = SpaceParams::finite(2.0, 1.0, 1.0);
        let r = shift_norm_exact_p2(&space, &CoeffOperator::integration(), 1, IndexCap::default()).unwrap();
        assert!(r.certified);
        assert!((r.log_norm - (6f64.sqrt() / 2.0).ln()).abs() < 1e-13);
        assert!((r.log_norm - 0.2027).abs() < 1e-4);
    }

    #[test]
    fn differentiation_norm_is_the_limit() {
        // entries alpha * sqrt(2k/(2k+1)) increase to alpha
        let space = SpaceParams::finite(2.0, 0.8, 1.0);
        let d = CoeffOperator::differentiation();
        let r = shift_norm_exact_p2(&space, &d, 1, IndexCap::default()).unwrap();
        assert!(r.certified);
        assert_eq!(r.location, SupLocation::Limit);
        assert!((r.log_norm - 0.8f64.ln()).abs() < 1e-14);
        let entry = shift_entry_log(&space, &d.terms[0], 1, 10).unwrap().unwrap();
        assert!((entry - (0.8 * (20.0f64 / 21.0).sqrt()).ln()).abs() < 1e-13);
    }

    #[test]
    fn unbounded_when_entries_diverge() {
        let space = SpaceParams::finite(2.0, 1.0, 2.0);
        let r = shift_norm_exact_p2(&space, &CoeffOperator::differentiation(), 1, IndexCap::default()).unwrap();
        assert_eq!(r.location, SupLocation::Unbounded);
        assert!(r.log_norm.is_infinite());
    }

    #[test]
    fn uncertified_at_small_cap() {
        // Entries still rising at a cap that is too small to see two doublings.
        let space = SpaceParams::finite(2.0, 0.8, 1.0);
        let cap = IndexCap { initial: 16, cap: 32 };
        let r = shift_norm_exact_p2(&space, &CoeffOperator::differentiation(), 1, cap).unwrap();
        assert!(!r.certified);
        assert!(r.log_norm < 0.8f64.ln());
    }

    #[test]
    fn finite_section_matches_exact_shift() {
        let space = SpaceParams::finite(2.0, 1.0, 1.0);
        for op in [CoeffOperator::hardy(), CoeffOperator::integration()] {
            let exact = shift_norm_exact_p2(&space, &op, 1, IndexCap::default()).unwrap().log_norm.exp();
            let section = operator_norm_p2(&space, &op, 200).unwrap().value;
            assert!((section / exact - 1.0).abs() < 1e-8, "{}", op.name);
        }
        assert!(
            (operator_norm_p2(&space, &CoeffOperator::integration(), 200).unwrap().value - 6f64.sqrt() / 2.0).abs()
                < 1e-8
        );
    }

    #[test]
    fn finite_section_of_powers() {
        let space = SpaceParams::finite(2.0, 1.0, 2.0);
        let j = CoeffOperator::integration();
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        for n in [2usize, 5] {
            let mut poly = vec![zero; n + 1];
            poly[n] = one;
            let section = poly_norm_p2(&space, &j, &poly, &[], 64, PowerSettings::default()).unwrap().value;
            let exact = shift_norm_exact_p2(&space, &j, n, IndexCap::default()).unwrap().log_norm.exp();
            assert!((section / exact - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn multi_term_section_dominates_test_vectors() {
        let space = SpaceParams::finite(2.0, 1.0, 2.0);
        let v = CoeffOperator::volterra(&SymbolPolynomial::from_real(&[0.0, 1.0, 1.0]));
        let section = operator_norm_p2(&space, &v, 120).unwrap().value;
        let lower = operator_norm_lower(&space, &v, 1, &monomial_testset(30)).unwrap().exp();
        assert!(section >= lower * (1.0 - 1e-10));
        for term in &v.terms {
            let single = CoeffOperator { name: "t".into(), terms: vec![term.clone()] };
            let s = operator_norm_p2(&space, &single, 120).unwrap().value;
            assert!(section >= 0.5 * s);
        }
    }

    #[test]
    fn hardy_lower_bound_from_constant() {
        let h = CoeffOperator::hardy();
        for space in [SpaceParams::finite(1.0, 1.0, 1.0), SpaceParams::sup(1.0, 2.0)] {
            let v = operator_norm_lower(&space, &h, 3, &[TaylorSeries::one()]).unwrap();
            assert!(v.abs() < 1e-14);
        }
    }
}
