//! Probes for the behaviour of iterates `T^n`: orbit norms, Gelfand
//! spectral radius, Cesàro means, Ritt quantities and the hypercyclicity
//! sequence of the differentiation operator.
//!
//! Every probe returns the raw sequence together with a three-valued
//! verdict. Finite ranges cannot prove asymptotic statements, so verdicts
//! are deterministic functions of the sequence with fixed thresholds.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::{
    monomial_testset, operator_norm_lower, poly_norm_p2, shift_entry_log, shift_norm_exact_p2, IndexCap,
    OrthonormalShifts, PowerSettings,
};
use crate::operators::CoeffOperator;
use crate::quadrature::log_sum_exp;
use crate::space::{monomial_norm_log, SpaceParams};
use crate::special::ln_factorial;

/// Relative noise band for monotonicity checks.
const NOISE: f64 = 1e-9;
/// Slope of `ln ||T^n||` against `ln n` separating growth from a plateau.
const ORBIT_SLOPE: f64 = 0.05;
/// Size of the orthonormal block on which the Cesàro limit is identified.
const LIMIT_BLOCK: usize = 8;
const SNAP_TOL: f64 = 1e-6;
/// Columns scanned for Cesàro lower bounds of weighted shifts.
const COLUMN_SCAN: usize = 256;
/// Diagonal entries scanned for diagonal operators.
const DIAGONAL_SCAN: usize = 1024;
/// Finite-section dimension for multi-term operators.
const SECTION: usize = 48;
/// Dead band for the coefficient of `ln n` in the hypercyclicity sequence.
const TREND_BAND: f64 = 0.02;

const PROBE_POWER: PowerSettings = PowerSettings { rel_tol: 1e-10, max_iter: 3000 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// How a sampled value relates to the exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundKind::Exact => "exact",
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
        })
    }
}

impl BoundKind {
    fn bounds_above(self) -> bool {
        matches!(self, BoundKind::Exact | BoundKind::Upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormSample {
    pub n: usize,
    pub log_value: f64,
    pub kind: BoundKind,
    pub certified: bool,
}

/// A sample stored on the linear scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub n: usize,
    pub value: f64,
    pub kind: BoundKind,
    pub certified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum NormMethod {
    /// Exact weighted-shift norms; single-term operators on `F^2`.
    ExactShift,
    /// Finite sections of `T^n` on `span{e_0, …, e_{K-1}}`; lower bounds.
    Matrix { truncation: usize },
    /// Monomial test vectors of degree up to `n·|min shift| + window`.
    TestVector { window: usize },
}

impl NormMethod {
    /// The strongest method available for the operator and space.
    pub fn auto(space: &SpaceParams, op: &CoeffOperator) -> Self {
        let p2 = space.p.finite() == Some(2.0);
        if p2 && op.single_term().is_some() {
            NormMethod::ExactShift
        } else if p2 {
            NormMethod::Matrix { truncation: SECTION }
        } else {
            NormMethod::TestVector { window: 32 }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            NormMethod::ExactShift => "exact-shift",
            NormMethod::Matrix { .. } => "matrix",
            NormMethod::TestVector { .. } => "test-vector",
        }
    }
}

/// `1..=min(nmax, 8)` followed by a geometric grid up to `nmax`.
pub fn sparse_indices(nmax: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=nmax.min(8)).collect();
    let mut x = 8.0f64;
    loop {
        x *= 1.25;
        let n = x.round() as usize;
        if n >= nmax {
            break;
        }
        if v.last().is_some_and(|&l| n > l) {
            v.push(n);
        }
    }
    if v.last().is_some_and(|&l| nmax > l) {
        v.push(nmax);
    }
    v
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn band(v: f64) -> f64 {
    NOISE * v.abs().max(1.0)
}

fn non_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0] - band(w[0]))
}

fn non_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0] + band(w[0]))
}

/// Non-decreasing and rising overall.
fn growing(v: &[f64]) -> bool {
    v.len() >= 2 && non_decreasing(v) && v[v.len() - 1] > v[0] + band(v[0])
}

/// Start of the last quartile, leaving at least two points.
fn last_quartile(len: usize) -> usize {
    (len * 3 / 4).min(len.saturating_sub(2))
}

fn last_half(len: usize) -> usize {
    (len / 2).min(len.saturating_sub(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitVerdict {
    BoundedSoFar,
    Growing,
    Decaying,
}

impl std::fmt::Display for OrbitVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OrbitVerdict::BoundedSoFar => "bounded-so-far",
            OrbitVerdict::Growing => "growing",
            OrbitVerdict::Decaying => "decaying",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport {
    pub method: NormMethod,
    pub norms: Vec<NormSample>,
    pub sup_log_norm: f64,
    /// Slope of `ln ||T^n||` against `ln n` over the last quartile.
    pub tail_slope: f64,
    pub verdict: OrbitVerdict,
}

impl OrbitReport {
    pub fn from_samples(method: NormMethod, norms: Vec<NormSample>) -> Self {
        let sup_log_norm = norms.iter().map(|s| s.log_value).fold(f64::NEG_INFINITY, f64::max);
        let tail = &norms[last_quartile(norms.len())..];
        let (tail_slope, verdict) = if tail.iter().any(|s| s.log_value == f64::INFINITY) {
            (f64::INFINITY, OrbitVerdict::Growing)
        } else if !tail.is_empty() && tail.iter().all(|s| s.log_value == f64::NEG_INFINITY) {
            (f64::NEG_INFINITY, OrbitVerdict::Decaying)
        } else {
            let finite: Vec<&NormSample> = tail.iter().filter(|s| s.log_value.is_finite()).collect();
            let xs: Vec<f64> = finite.iter().map(|s| (s.n as f64).ln()).collect();
            let ys: Vec<f64> = finite.iter().map(|s| s.log_value).collect();
            let slope = least_squares_slope(&xs, &ys);
            let verdict = if ys.len() >= 2 && non_decreasing(&ys) && slope > ORBIT_SLOPE {
                OrbitVerdict::Growing
            } else if ys.len() >= 2 && non_increasing(&ys) && slope < -ORBIT_SLOPE {
                OrbitVerdict::Decaying
            } else {
                OrbitVerdict::BoundedSoFar
            };
            (slope, verdict)
        };
        Self { method, norms, sup_log_norm, tail_slope, verdict }
    }

    pub fn all_certified(&self) -> bool {
        self.norms.iter().all(|s| s.certified)
    }

    /// Power-boundedness reading of the orbit: growth of certified values
    /// (exact or lower bounds) refutes it, a bounded or decaying run of
    /// certified exact values supports it.
    pub fn power_bounded_verdict(&self) -> Verdict {
        if !self.all_certified() || self.norms.is_empty() {
            return Verdict::Inconclusive;
        }
        match self.verdict {
            OrbitVerdict::Growing => Verdict::False,
            _ if self.norms.iter().all(|s| s.kind.bounds_above()) => Verdict::True,
            _ => Verdict::Inconclusive,
        }
    }
}

/// One value of the norm sequence by the requested method.
pub fn norm_sample(space: &SpaceParams, op: &CoeffOperator, n: usize, method: NormMethod) -> Result<NormSample> {
    match method {
        NormMethod::ExactShift => {
            let r = shift_norm_exact_p2(space, op, n, IndexCap::default())?;
            Ok(NormSample { n, log_value: r.log_norm, kind: BoundKind::Exact, certified: r.certified })
        }
        NormMethod::Matrix { truncation } => {
            let mut poly = vec![Complex64::new(0.0, 0.0); n + 1];
            poly[n] = Complex64::new(1.0, 0.0);
            let r = poly_norm_p2(space, op, &poly, &[], truncation, PROBE_POWER)?;
            Ok(NormSample { n, log_value: r.value.ln(), kind: BoundKind::Lower, certified: true })
        }
        NormMethod::TestVector { window } => {
            let drop = (-op.min_shift()).max(0) as usize;
            let log_value = operator_norm_lower(space, op, n, &monomial_testset(n * drop + window))?;
            Ok(NormSample { n, log_value, kind: BoundKind::Lower, certified: true })
        }
    }
}

/// `ln ||T^n||` for `n = 1..=nmax` (a geometric subset for the matrix
/// method, whose cost grows with `n`).
pub fn iterate_norm_sequence(
    space: &SpaceParams,
    op: &CoeffOperator,
    nmax: usize,
    method: NormMethod,
) -> Result<OrbitReport> {
    if nmax == 0 {
        return Err(Error::InvalidArgument("nmax must be positive".into()));
    }
    let indices: Vec<usize> = match method {
        NormMethod::Matrix { .. } => sparse_indices(nmax),
        _ => (1..=nmax).collect(),
    };
    let norms = indices.into_iter().map(|n| norm_sample(space, op, n, method)).collect::<Result<Vec<_>>>()?;
    Ok(OrbitReport::from_samples(method, norms))
}

/// `y(n) = L + c ln(n)/n + d/n` fitted through three dyadic indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GelfandFit {
    pub indices: [usize; 3],
    pub limit_log: f64,
    pub log_coeff: f64,
    pub inv_coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    /// `(n, ln ||T^n||^{1/n})`.
    pub gelfand: Vec<(usize, f64)>,
    pub fit: Option<GelfandFit>,
    pub extrapolated_radius: f64,
    pub quasi_nilpotent: bool,
    pub threshold: f64,
}

/// Gelfand sequence from certified exact shift norms.
pub fn gelfand_estimate(space: &SpaceParams, op: &CoeffOperator, nmax: usize) -> Result<SpectralReport> {
    space.require_p2()?;
    if op.single_term().is_none() {
        return Err(Error::Uncertified(format!("{} has no exact norm route", op.name)));
    }
    let orbit = iterate_norm_sequence(space, op, nmax, NormMethod::ExactShift)?;
    gelfand_from_orbit(&orbit, 1e-3)
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> [f64; 3] {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    let mut out = [0.0; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        *o = det(m) / d;
    }
    out
}

/// Extrapolates `lim ||T^n||^{1/n}` from an orbit of certified exact norms.
///
/// The operator is declared quasi-nilpotent when the dyadic decrements of
/// `y(n) = ln ||T^n|| / n` do not shrink (the sequence is heading to `-∞`,
/// reported radius 0) or when the fitted radius is below `threshold`.
pub fn gelfand_from_orbit(orbit: &OrbitReport, threshold: f64) -> Result<SpectralReport> {
    if !orbit.norms.iter().all(|s| s.certified && s.kind == BoundKind::Exact) {
        return Err(Error::Uncertified("Gelfand extrapolation needs certified exact norms".into()));
    }
    let nmax = orbit.norms.last().map_or(0, |s| s.n);
    if nmax < 8 || orbit.norms.len() != nmax {
        return Err(Error::InvalidArgument("Gelfand extrapolation needs norms for n = 1..nmax, nmax >= 8".into()));
    }
    if orbit.norms.iter().any(|s| s.log_value == f64::INFINITY) {
        return Err(Error::Extrapolation(format!("{} is unbounded", orbit.method.label())));
    }
    let gelfand: Vec<(usize, f64)> = orbit.norms.iter().map(|s| (s.n, s.log_value / s.n as f64)).collect();
    if gelfand.iter().any(|(_, y)| *y == f64::NEG_INFINITY) {
        return Ok(SpectralReport { gelfand, fit: None, extrapolated_radius: 0.0, quasi_nilpotent: true, threshold });
    }
    let tail: Vec<f64> = gelfand[nmax / 2 - 1..].iter().map(|g| g.1).collect();
    if !non_increasing(&tail) && !non_decreasing(&tail) {
        return Err(Error::Extrapolation("Gelfand sequence is not monotone on the last half".into()));
    }
    let indices = [nmax / 4, nmax / 2, nmax];
    let y = indices.map(|n| gelfand[n - 1].1);
    let rows = indices.map(|n| {
        let nf = n as f64;
        [1.0, nf.ln() / nf, 1.0 / nf]
    });
    let [limit_log, log_coeff, inv_coeff] = solve3(rows, y);
    let (d1, d2) = (y[1] - y[0], y[2] - y[1]);
    let diverging = d1 < 0.0 && d2 < 0.0 && d2 / d1 > 0.8;
    let quasi_nilpotent = diverging || limit_log.exp() < threshold;
    Ok(SpectralReport {
        gelfand,
        fit: Some(GelfandFit { indices, limit_log, log_coeff, inv_coeff }),
        extrapolated_radius: if quasi_nilpotent { 0.0 } else { limit_log.exp() },
        quasi_nilpotent,
        threshold,
    })
}

/// Limit of the Cesàro means identified on the leading orthonormal block.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum LimitCandidate {
    Zero,
    /// Projection onto the listed basis vectors.
    CoordinateProjection {
        indices: Vec<usize>,
    },
    /// Not a coordinate projection; `deviation` is the distance to the
    /// nearest one.
    Matrix {
        deviation: f64,
    },
}

impl LimitCandidate {
    fn indices(&self) -> &[usize] {
        match self {
            LimitCandidate::CoordinateProjection { indices } => indices,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErgodicReport {
    /// `ln ||A_n − P̂||`: exact for diagonal operators, upper bounds for
    /// weighted shifts, finite-section lower bounds otherwise.
    pub cesaro_norms: Vec<NormSample>,
    /// Column lower bounds for weighted shifts.
    pub cesaro_lower: Vec<NormSample>,
    pub limit: LimitCandidate,
    pub block_size: usize,
    pub idempotence_residual: f64,
    /// `β` in `||A_n − P̂|| ≍ n^{-β}`, fitted over the last half.
    pub rate_exponent: Option<f64>,
    pub ume_verdict: Verdict,
}

type Block = Vec<Vec<Complex64>>;

/// Leading block of `A_n = (1/n) Σ_{j=1..n} T^j`; `block[i][k]` is the
/// coefficient of `e_i` in `A_n e_k`.
fn cesaro_block(space: &SpaceParams, op: &CoeffOperator, n: usize) -> Result<Block> {
    let len = LIMIT_BLOCK + n * op.max_shift().max(0) as usize + 1;
    let mat = OrthonormalShifts::new(space, op, len)?;
    let mut block = vec![vec![Complex64::new(0.0, 0.0); LIMIT_BLOCK]; LIMIT_BLOCK];
    for k in 0..LIMIT_BLOCK {
        let mut x = vec![Complex64::new(0.0, 0.0); len];
        x[k] = Complex64::new(1.0, 0.0);
        let mut acc = vec![Complex64::new(0.0, 0.0); LIMIT_BLOCK];
        for _ in 0..n {
            x = mat.apply(&x);
            acc.iter_mut().zip(&x).for_each(|(a, v)| *a += v);
        }
        for i in 0..LIMIT_BLOCK {
            block[i][k] = acc[i] / n as f64;
        }
    }
    Ok(block)
}

/// Snaps `2 A_N − A_{N/2}` to a coordinate projection and returns it with
/// the idempotence residual `max |P̂² − P̂|`.
fn limit_candidate(space: &SpaceParams, op: &CoeffOperator, nmax: usize) -> Result<(LimitCandidate, f64)> {
    let full = cesaro_block(space, op, nmax)?;
    let half = cesaro_block(space, op, (nmax / 2).max(1))?;
    let p: Block =
        (0..LIMIT_BLOCK).map(|i| (0..LIMIT_BLOCK).map(|k| full[i][k] * 2.0 - half[i][k]).collect()).collect();
    let mut residual: f64 = 0.0;
    for i in 0..LIMIT_BLOCK {
        for k in 0..LIMIT_BLOCK {
            let sq: Complex64 = (0..LIMIT_BLOCK).map(|j| p[i][j] * p[j][k]).sum();
            residual = residual.max((sq - p[i][k]).norm());
        }
    }
    let indices: Vec<usize> = (0..LIMIT_BLOCK).filter(|&i| (p[i][i] - 1.0).norm() < 0.5).collect();
    let mut deviation: f64 = 0.0;
    for i in 0..LIMIT_BLOCK {
        for k in 0..LIMIT_BLOCK {
            let target = if i == k && indices.contains(&i) { 1.0 } else { 0.0 };
            deviation = deviation.max((p[i][k] - target).norm());
        }
    }
    let candidate = if deviation >= SNAP_TOL {
        LimitCandidate::Matrix { deviation }
    } else if indices.is_empty() {
        LimitCandidate::Zero
    } else {
        LimitCandidate::CoordinateProjection { indices }
    };
    Ok((candidate, residual))
}

/// Cesàro means `A_n = (1/n) Σ_{k=1..n} T^k` on `F^2` and their distance to
/// the identified limit.
pub fn cesaro_report(space: &SpaceParams, op: &CoeffOperator, nmax: usize) -> Result<ErgodicReport> {
    space.require_p2()?;
    if nmax < 4 {
        return Err(Error::InvalidArgument("Cesàro probe needs nmax >= 4".into()));
    }
    let (limit, idempotence_residual) = limit_candidate(space, op, nmax)?;
    let projection = limit.indices().to_vec();
    let mut cesaro_lower = Vec::new();
    let cesaro_norms = match op.single_term() {
        Some(term) if term.shift == 0 => {
            // Diagonal: entries (1/n) Σ w_k^j − [k ∈ P], decreasing in k for
            // the Hardy weights.
            let weights: Vec<Complex64> = (0..DIAGONAL_SCAN).map(|k| term.weight(k)).collect();
            let mut sums = vec![Complex64::new(0.0, 0.0); DIAGONAL_SCAN];
            let mut powers = vec![Complex64::new(1.0, 0.0); DIAGONAL_SCAN];
            (1..=nmax)
                .map(|n| {
                    let mut sup: f64 = 0.0;
                    for k in 0..DIAGONAL_SCAN {
                        powers[k] *= weights[k];
                        sums[k] += powers[k];
                        let p = if projection.contains(&k) { 1.0 } else { 0.0 };
                        sup = sup.max((sums[k] / n as f64 - p).norm());
                    }
                    NormSample { n, log_value: sup.ln(), kind: BoundKind::Exact, certified: true }
                })
                .collect()
        }
        Some(term) => {
            let norms = (1..=nmax)
                .map(|j| shift_norm_exact_p2(space, op, j, IndexCap::default()))
                .collect::<Result<Vec<_>>>()?;
            let mut upper = Vec::with_capacity(nmax);
            let mut certified = true;
            for n in 1..=nmax {
                certified &= norms[n - 1].certified;
                let logs: Vec<f64> = norms[..n].iter().map(|r| r.log_norm).collect();
                let log_value = log_sum_exp(&logs) - (n as f64).ln();
                upper.push(NormSample { n, log_value, kind: BoundKind::Upper, certified });
            }
            // A_n e_k has orthogonal components T^j e_k, so its norm is exact.
            let mut columns: Vec<Vec<_>> = (0..COLUMN_SCAN).map(|_| Vec::with_capacity(nmax)).collect();
            for (k, col) in columns.iter_mut().enumerate() {
                for j in 1..=nmax {
                    let e = shift_entry_log(space, term, j, k)?.unwrap_or(f64::NEG_INFINITY);
                    col.push(2.0 * e);
                }
            }
            for n in 1..=nmax {
                let best = columns.iter().map(|col| 0.5 * log_sum_exp(&col[..n])).fold(f64::NEG_INFINITY, f64::max);
                cesaro_lower.push(NormSample {
                    n,
                    log_value: best - (n as f64).ln(),
                    kind: BoundKind::Lower,
                    certified: true,
                });
            }
            upper
        }
        None => sparse_indices(nmax)
            .into_iter()
            .map(|n| {
                let mut poly = vec![Complex64::new(1.0 / n as f64, 0.0); n + 1];
                poly[0] = Complex64::new(0.0, 0.0);
                let r = poly_norm_p2(space, op, &poly, &projection, SECTION, PROBE_POWER)?;
                Ok(NormSample { n, log_value: r.value.ln(), kind: BoundKind::Lower, certified: true })
            })
            .collect::<Result<Vec<_>>>()?,
    };

    let tail = &cesaro_norms[last_half(cesaro_norms.len())..];
    let finite: Vec<&NormSample> = tail.iter().filter(|s| s.log_value.is_finite()).collect();
    let rate_exponent = (finite.len() >= 2).then(|| {
        let xs: Vec<f64> = finite.iter().map(|s| (s.n as f64).ln()).collect();
        let ys: Vec<f64> = finite.iter().map(|s| s.log_value).collect();
        -least_squares_slope(&xs, &ys)
    });

    let upper_available = !cesaro_norms.is_empty() && cesaro_norms.iter().all(|s| s.certified && s.kind.bounds_above());
    let tail_values: Vec<f64> = tail.iter().map(|s| s.log_value).collect();
    let lower_source: &[NormSample] = if cesaro_lower.is_empty() { &cesaro_norms } else { &cesaro_lower };
    let lower_tail: Vec<f64> = lower_source[last_quartile(lower_source.len())..].iter().map(|s| s.log_value).collect();
    let ume_verdict = if matches!(limit, LimitCandidate::Matrix { .. }) {
        Verdict::Inconclusive
    } else if upper_available
        && non_increasing(&tail_values)
        && rate_exponent.is_some_and(|b| b >= 0.5)
        && idempotence_residual <= SNAP_TOL
    {
        Verdict::True
    } else if growing(&lower_tail) {
        Verdict::False
    } else {
        Verdict::Inconclusive
    };
    Ok(ErgodicReport {
        cesaro_norms,
        cesaro_lower,
        limit,
        block_size: LIMIT_BLOCK,
        idempotence_residual,
        rate_exponent,
        ume_verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RittReport {
    /// `n ||T^{n+1} − T^n||`: exact for diagonal operators, upper bounds for
    /// weighted shifts, finite-section lower bounds otherwise.
    pub quantities: Vec<Sample>,
    /// `n max(||T^{n+1}||, ||T^n||)` for weighted shifts.
    pub lower: Vec<Sample>,
    pub sup_estimate: f64,
    pub cap: f64,
    pub verdict: Verdict,
}

/// `n ||T^{n+1} − T^n||` for `n = 1..=nmax` on `F^2`.
pub fn ritt_sequence(space: &SpaceParams, op: &CoeffOperator, nmax: usize, cap: f64) -> Result<RittReport> {
    space.require_p2()?;
    if nmax == 0 {
        return Err(Error::InvalidArgument("nmax must be positive".into()));
    }
    let mut lower = Vec::new();
    let quantities: Vec<Sample> = match op.single_term() {
        Some(term) if term.shift == 0 => {
            let weights: Vec<Complex64> = (0..DIAGONAL_SCAN).map(|k| term.weight(k)).collect();
            let mut powers = vec![Complex64::new(1.0, 0.0); DIAGONAL_SCAN];
            (1..=nmax)
                .map(|n| {
                    let mut sup: f64 = 0.0;
                    for k in 0..DIAGONAL_SCAN {
                        powers[k] *= weights[k];
                        sup = sup.max((powers[k] * (weights[k] - 1.0)).norm());
                    }
                    Sample { n, value: n as f64 * sup, kind: BoundKind::Exact, certified: true }
                })
                .collect()
        }
        Some(_) => {
            let norms = (1..=nmax + 1)
                .map(|j| shift_norm_exact_p2(space, op, j, IndexCap::default()))
                .collect::<Result<Vec<_>>>()?;
            let mut upper = Vec::with_capacity(nmax);
            for n in 1..=nmax {
                let (a, b) = (&norms[n - 1], &norms[n]);
                let certified = a.certified && b.certified;
                let nf = n as f64;
                upper.push(Sample {
                    n,
                    value: nf * (a.log_norm.exp() + b.log_norm.exp()),
                    kind: BoundKind::Upper,
                    certified,
                });
                lower.push(Sample {
                    n,
                    value: nf * a.log_norm.max(b.log_norm).exp(),
                    kind: BoundKind::Lower,
                    certified,
                });
            }
            upper
        }
        None => sparse_indices(nmax)
            .into_iter()
            .map(|n| {
                let mut poly = vec![Complex64::new(0.0, 0.0); n + 2];
                poly[n] = Complex64::new(-(n as f64), 0.0);
                poly[n + 1] = Complex64::new(n as f64, 0.0);
                let r = poly_norm_p2(space, op, &poly, &[], SECTION, PROBE_POWER)?;
                Ok(Sample { n, value: r.value, kind: BoundKind::Lower, certified: true })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let sup_estimate = quantities.iter().map(|s| s.value).fold(0.0, f64::max);
    let upper_available = quantities.iter().all(|s| s.certified && s.kind.bounds_above());
    let tail: Vec<f64> = quantities[last_quartile(quantities.len())..].iter().map(|s| s.value).collect();
    let lower_source: &[Sample] = if lower.is_empty() { &quantities } else { &lower };
    let lower_certified = lower_source.iter().all(|s| s.certified);
    let lower_tail: Vec<f64> = lower_source[last_quartile(lower_source.len())..].iter().map(|s| s.value).collect();
    let verdict = if upper_available && quantities.iter().all(|s| s.value <= cap) && non_increasing(&tail) {
        Verdict::True
    } else if lower_certified && (lower_source.iter().any(|s| s.value > cap) || growing(&lower_tail)) {
        Verdict::False
    } else {
        Verdict::Inconclusive
    };
    Ok(RittReport { quantities, lower, sup_estimate, cap, verdict })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    /// `||z^n|| / n! → 0`.
    ToZero,
    ToInfinity,
    /// Bounded above and away from zero.
    BoundedAway,
}

impl std::fmt::Display for Trend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Trend::ToZero => "to-zero",
            Trend::ToInfinity => "to-infinity",
            Trend::BoundedAway => "bounded-away",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypercyclicityReport {
    /// `(n, ln ||z^n|| − ln n!)`.
    pub values: Vec<(usize, f64)>,
    /// Least-squares slope against `n` over the last half.
    pub tail_slope: f64,
    /// Slope rescaled to the coefficient `c` of a `c ln n` trend.
    pub log_coefficient: f64,
    pub trend: Trend,
}

/// `ln(||z^n|| / n!)` on `F^p_(α, 1)`, whose decay to zero decides
/// hypercyclicity of the differentiation operator.
pub fn d_hypercyclicity_sequence(space: &SpaceParams, nmax: usize) -> Result<HypercyclicityReport> {
    space.require_finite()?;
    if space.m != 1.0 {
        return Err(Error::InvalidArgument(format!("hypercyclicity sequence needs m = 1, got {}", space.m)));
    }
    if nmax < 4 {
        return Err(Error::InvalidArgument("hypercyclicity sequence needs nmax >= 4".into()));
    }
    let values = (1..=nmax)
        .map(|n| Ok((n, monomial_norm_log(space, n)? - ln_factorial(n as u64))))
        .collect::<Result<Vec<_>>>()?;
    let tail = &values[last_half(values.len())..];
    let xs: Vec<f64> = tail.iter().map(|v| v.0 as f64).collect();
    let ys: Vec<f64> = tail.iter().map(|v| v.1).collect();
    let tail_slope = least_squares_slope(&xs, &ys);
    let log_coefficient = tail_slope * nmax as f64 / (2.0 * std::f64::consts::LN_2);
    let trend = if log_coefficient.abs() < TREND_BAND {
        Trend::BoundedAway
    } else if log_coefficient < 0.0 {
        Trend::ToZero
    } else {
        Trend::ToInfinity
    };
    Ok(HypercyclicityReport { values, tail_slope, log_coefficient, trend })
}
