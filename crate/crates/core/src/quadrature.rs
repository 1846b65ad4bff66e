//! Three routes to the norm of a polynomial in `F^p_(α, m)`:
//! radial quadrature of integral means, Parseval for `p = 2`, and a
//! grid-search estimate of the sup norm for `p = ∞`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::TaylorSeries;
use crate::space::{tail_radius, Exponent, SpaceParams};

/// Settings for the radial/angular quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Uniform angular nodes on each circle.
    pub theta_points: usize,
    pub radial_rel_tol: f64,
    /// Relative tail mass dropped beyond the integration radius.
    pub tail_eps: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { theta_points: 64, radial_rel_tol: 1e-11, tail_eps: 1e-15, max_subdivisions: 20_000 }
    }
}

impl QuadratureConfig {
    /// Default settings with enough angular nodes for a series of `degree`.
    pub fn for_degree(degree: usize) -> Self {
        let mut cfg = Self::default();
        cfg.theta_points = cfg.theta_points.max(min_theta_points(degree));
        cfg
    }
}

/// Smallest angular grid for which the periodic trapezoid rule integrates
/// `|f|^2` exactly for `f` of this degree.
pub fn min_theta_points(degree: usize) -> usize {
    2 * degree + 2
}

const GAUSS_ORDER: usize = 20;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_ORDER;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

fn gauss_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * gauss_legendre().iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>()
}

/// Adaptive bisection over panels `(a, b, gauss estimate)`.
///
/// A panel is accepted when the Gauss estimate on the whole panel and on its
/// two halves agree to within its length-proportional share of `abs_tol`.
fn refine_panels<F: Fn(f64) -> f64>(
    f: &F,
    mut panels: Vec<(f64, f64, f64)>,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<f64> {
    let total_len = panels.last().unwrap().1 - panels[0].0;
    panels.reverse();
    let mut stack = panels;
    let mut total = 0.0;
    let mut splits = 0;
    let mut worst = 0.0f64;
    while let Some((a, b, whole)) = stack.pop() {
        let c = 0.5 * (a + b);
        let left = gauss_panel(f, a, c);
        let right = gauss_panel(f, c, b);
        let err = (left + right - whole).abs();
        let share = abs_tol * (b - a) / total_len;
        if err <= share || (b - a) <= 1e-13 * total_len {
            total += left + right;
            continue;
        }
        splits += 1;
        if splits > max_subdivisions {
            worst = worst.max(err);
            return Err(Error::QuadratureBudget { tol: abs_tol, subdivisions: max_subdivisions, estimate: worst });
        }
        stack.push((c, b, right));
        stack.push((a, c, left));
    }
    Ok(total)
}

fn check_theta(f: &TaylorSeries, cfg: &QuadratureConfig) -> Result<()> {
    let need = min_theta_points(f.degree());
    if cfg.theta_points < need {
        return Err(Error::InvalidArgument(format!(
            "theta_points = {} is below {} required for degree {}",
            cfg.theta_points,
            need,
            f.degree()
        )));
    }
    Ok(())
}

/// `e^{2πij/n}`, `j = 0..n`.
fn unit_roots(n: usize) -> Vec<Complex64> {
    let step = 2.0 * PI / n as f64;
    (0..n).map(|j| Complex64::from_polar(1.0, j as f64 * step)).collect()
}

/// `ln M_p^p(f, r)` on the angular grid `roots`.
///
/// For `r > 1` Horner runs in `1/z` on the reversed coefficients, so
/// `|f| = r^deg |g|` never overflows.
fn log_mean_power(f: &TaylorSeries, r: f64, p: f64, roots: &[Complex64]) -> f64 {
    let coeffs = f.coeffs();
    let (scale, squares): (f64, Vec<f64>) = if r <= 1.0 {
        let sq = roots
            .iter()
            .map(|&u| {
                let z = u * r;
                coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c).norm_sqr()
            })
            .collect();
        (0.0, sq)
    } else {
        let sq = roots
            .iter()
            .map(|&u| {
                let w = u.conj() / r;
                coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c).norm_sqr()
            })
            .collect();
        (f.degree() as f64 * r.ln(), sq)
    };
    let top = squares.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return f64::NEG_INFINITY;
    }
    let half_p = 0.5 * p;
    let mean = squares.iter().map(|&s| (s / top).powf(half_p)).sum::<f64>() / roots.len() as f64;
    p * scale + half_p * top.ln() + mean.ln()
}

/// `M_p(f, r) = (∫ |f(r e^{it})|^p dt / 2π)^{1/p}` by the periodic
/// trapezoid rule; exact for `p = 2`.
pub fn integral_mean(f: &TaylorSeries, r: f64, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be >= 0, got {r}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("p must be in [1, inf), got {p}")));
    }
    check_theta(f, cfg)?;
    Ok((log_mean_power(f, r, p, &unit_roots(cfg.theta_points)) / p).exp())
}

/// `ln ||f||_(p, α, m)` by adaptive radial quadrature of
/// `2π M_p^p(f, r) r e^{-pα r^m}` over `[0, R]`.
pub fn norm_quadrature_log(space: &SpaceParams, f: &TaylorSeries, cfg: &QuadratureConfig) -> Result<f64> {
    let p = space.require_finite()?;
    check_theta(f, cfg)?;
    if f.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    let (alpha, m) = (space.alpha, space.m);
    let radius = tail_radius(space, f.degree(), cfg.tail_eps)?;
    let roots = unit_roots(cfg.theta_points);
    let log_integrand = |r: f64| -> f64 {
        if r <= 0.0 {
            return f64::NEG_INFINITY;
        }
        log_mean_power(f, r, p, &roots) + r.ln() - p * alpha * r.powf(m)
    };

    // Locate the bulk so the integrand can be rescaled to O(1).
    const SCAN: usize = 32;
    let mut scale = f64::NEG_INFINITY;
    let mut peak_r = radius;
    for i in 1..=SCAN {
        for r in [radius * i as f64 / SCAN as f64, radius * 0.5f64.powi(i as i32)] {
            let v = log_integrand(r);
            if v > scale {
                scale = v;
                peak_r = r;
            }
        }
    }
    let integrand = |r: f64| (log_integrand(r) - scale).exp();

    const PANELS: usize = 16;
    let mut breaks: Vec<f64> = (0..=PANELS).map(|i| radius * i as f64 / PANELS as f64).collect();
    breaks.push(peak_r);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let panels: Vec<(f64, f64, f64)> =
        breaks.windows(2).map(|w| (w[0], w[1], gauss_panel(&integrand, w[0], w[1]))).collect();
    let estimate: f64 = panels.iter().map(|p| p.2).sum();
    let abs_tol = cfg.radial_rel_tol * estimate.abs().max(f64::MIN_POSITIVE);
    let value = refine_panels(&integrand, panels, abs_tol, cfg.max_subdivisions)?;
    Ok(((2.0 * PI).ln() + scale + value.ln()) / p)
}

/// `||f||_(p, α, m)` by radial quadrature; see [`norm_quadrature_log`].
pub fn norm_quadrature(space: &SpaceParams, f: &TaylorSeries, cfg: &QuadratureConfig) -> Result<f64> {
    norm_quadrature_log(space, f, cfg).map(f64::exp)
}

/// `ln ||f||` in `F^2_(α, m)` from the orthogonality of monomials:
/// `||f||^2 = Σ |a_k|^2 ||z^k||^2`.
pub fn norm_parseval_log(space: &SpaceParams, f: &TaylorSeries) -> Result<f64> {
    space.require_p2()?;
    let terms: Vec<f64> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| Ok(2.0 * (c.norm().ln() + crate::space::monomial_norm_log(space, k)?)))
        .collect::<Result<_>>()?;
    Ok(0.5 * log_sum_exp(&terms))
}

pub fn norm_parseval(space: &SpaceParams, f: &TaylorSeries) -> Result<f64> {
    norm_parseval_log(space, f).map(f64::exp)
}

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let top = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + xs.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

/// Resolution of the sup-norm search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupGrid {
    /// Geometric radial nodes on `[radius * 1e-8, radius]`.
    pub radial_points: usize,
    /// Minimum uniform angular nodes; raised to `2·degree + 2`.
    pub theta_points: usize,
    /// Weighted-value drop that fixes the search radius.
    pub tail_eps: f64,
    /// Coordinate-ascent rounds around the best grid points.
    pub refine_rounds: usize,
}

impl Default for SupGrid {
    fn default() -> Self {
        Self { radial_points: 240, theta_points: 32, tail_eps: 1e-14, refine_rounds: 4 }
    }
}

/// Sup-norm estimate with the location of the best point found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupEstimate {
    pub log_value: f64,
    pub r: f64,
    pub theta: f64,
    pub radius: f64,
    pub grid: SupGrid,
}

impl SupEstimate {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// Lower estimate of `||f||_(∞, α, m) = sup_z e^{-α|z|^m} |f(z)|`.
///
/// Every reported value is an actual evaluation of the weighted modulus, so
/// the estimate never exceeds the true norm.
pub fn norm_sup(space: &SpaceParams, f: &TaylorSeries, grid: &SupGrid) -> Result<SupEstimate> {
    space.validate()?;
    if !space.p.is_infinite() {
        return Err(Error::UnsupportedExponent { required: "p = inf", actual: format!("p = {}", space.p) });
    }
    sup_search(f, space.alpha, space.m, tail_radius(space, f.degree(), grid.tail_eps)?, grid)
}

fn sup_search(f: &TaylorSeries, alpha: f64, m: f64, radius: f64, grid: &SupGrid) -> Result<SupEstimate> {
    let objective = |lr: f64, t: f64| {
        let r = lr.exp();
        f.log_abs_at(r, t) - alpha * r.powf(m)
    };
    let mut best = SupEstimate { log_value: f.coeff(0).norm().ln(), r: 0.0, theta: 0.0, radius, grid: *grid };
    if f.is_zero() {
        return Ok(best);
    }
    let nr = grid.radial_points.max(8);
    let nt = grid.theta_points.max(min_theta_points(f.degree())).max(8);
    let lr_lo = radius.ln() + 1e-8f64.ln();
    let dlr = (radius.ln() - lr_lo) / (nr - 1) as f64;
    let dt = 2.0 * PI / nt as f64;

    let mut values = vec![f64::NEG_INFINITY; nr * nt];
    for i in 0..nr {
        for j in 0..nt {
            values[i * nt + j] = objective(lr_lo + i as f64 * dlr, j as f64 * dt);
        }
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

    let mut seeds: Vec<(usize, usize)> = Vec::new();
    for idx in order {
        let (i, j) = (idx / nt, idx % nt);
        let near = seeds.iter().any(|&(si, sj)| {
            let dj = (sj as isize - j as isize).rem_euclid(nt as isize);
            si.abs_diff(i) <= 2 && (dj <= 2 || dj >= nt as isize - 2)
        });
        if !near {
            seeds.push((i, j));
        }
        if seeds.len() == 4 {
            break;
        }
    }

    let consider = |lr: f64, t: f64, v: f64, best: &mut SupEstimate| {
        if v > best.log_value {
            *best = SupEstimate { log_value: v, r: lr.exp(), theta: t, ..*best };
        }
    };
    for (i, j) in seeds {
        let (mut lr, mut t) = (lr_lo + i as f64 * dlr, j as f64 * dt);
        let mut v = values[i * nt + j];
        consider(lr, t, v, &mut best);
        let (mut wr, mut wt) = (dlr, dt);
        for _ in 0..grid.refine_rounds {
            let (l2, v2) = golden_max(|x| objective(x, t), lr - wr, lr + wr);
            if v2 > v {
                lr = l2;
                v = v2;
            }
            let (t2, v3) = golden_max(|x| objective(lr, x), t - wt, t + wt);
            if v3 > v {
                t = t2;
                v = v3;
            }
            consider(lr, t, v, &mut best);
            wr *= 0.5;
            wt *= 0.5;
        }
    }
    Ok(best)
}

/// Golden-section search for a maximum on `[a, b]`; returns the best point
/// evaluated.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Best available estimate of `ln ||f||` for any `p`: closed form for
/// monomials, Parseval for `p = 2`, otherwise quadrature or the sup grid.
pub fn norm_log(space: &SpaceParams, f: &TaylorSeries) -> Result<f64> {
    if f.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    if let Some((k, c)) = f.as_monomial() {
        return Ok(c.norm().ln() + space.monomial_log_norm(k)?);
    }
    match space.p {
        Exponent::Finite(p) if p == 2.0 => norm_parseval_log(space, f),
        Exponent::Finite(_) => norm_quadrature_log(space, f, &QuadratureConfig::for_degree(f.degree())),
        Exponent::Infinite => Ok(norm_sup(space, f, &SupGrid::default())?.log_value),
    }
}
