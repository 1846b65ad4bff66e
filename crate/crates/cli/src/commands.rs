use std::path::{Path, PathBuf};

use anyhow::Context;
use fockdyn::dynamics::{
    cesaro_report, d_hypercyclicity_sequence, gelfand_estimate, iterate_norm_sequence, ritt_sequence, GelfandFit,
    LimitCandidate, OrbitVerdict, Trend,
};
use fockdyn::quadrature::{norm_quadrature_log, norm_sup, QuadratureConfig, SupGrid};
use fockdyn::space::{monomial_norm_asymptotic_log, monomial_norm_log, monomial_norm_sup_log};
use fockdyn::{
    classify, cross_check, BoundKind, Classification, CoeffOperator, CrossCheckSettings, Error, Exponent, NormMethod,
    OperatorKind, SpaceParams, TaylorSeries, Verdict,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::artifacts::{count_csv_rows, write_csv, write_json};
use crate::config::{ExperimentConfig, Probe, SCHEMA_VERSION};

/// How a command ended when its artifacts were written.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Set when a computation failed or missed its tolerance; the process
    /// exits with status 3 after the artifacts are on disk.
    pub failure: Option<String>,
}

fn run_cells<'a, T: Send, F>(cfg: &'a ExperimentConfig, f: F) -> anyhow::Result<Vec<T>>
where
    F: Fn(usize, &'a SpaceParams) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    Ok(pool.install(|| cfg.cells.par_iter().enumerate().map(|(i, s)| f(i, s)).collect()))
}

fn prepare_out(cfg: &ExperimentConfig) -> anyhow::Result<&Path> {
    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    Ok(&cfg.out)
}

/// `p` as written for the other float columns, or `inf`.
fn p_field(space: &SpaceParams) -> String {
    match space.p {
        Exponent::Finite(p) => format!("{p:?}"),
        Exponent::Infinite => "inf".into(),
    }
}

// ---------------------------------------------------------------- norms

#[derive(Debug, Serialize)]
struct NormRow {
    cell: usize,
    p: String,
    alpha: f64,
    m: f64,
    n: usize,
    exact_log: f64,
    asymptotic_log: Option<f64>,
    quadrature_log: Option<f64>,
    rel_error: Option<f64>,
    certified: bool,
    note: String,
}

#[derive(Debug, Serialize)]
struct NormCellSummary {
    cell: usize,
    space: SpaceParams,
    route: &'static str,
    max_rel_error: f64,
    failures: usize,
}

#[derive(Debug, Serialize)]
struct NormSummary {
    schema_version: u32,
    command: &'static str,
    nmax: usize,
    tol: f64,
    max_rel_error: f64,
    failures: usize,
    passed: bool,
    cells: Vec<NormCellSummary>,
}

fn norm_cell(cell: usize, space: &SpaceParams, nmax: usize) -> (Vec<NormRow>, NormCellSummary) {
    let mut rows = Vec::with_capacity(nmax + 1);
    let (mut worst, mut failures) = (0.0f64, 0);
    for n in 0..=nmax {
        let f = TaylorSeries::monomial(n, Complex64::new(1.0, 0.0));
        let (exact, asymptotic, numeric) = match space.p {
            Exponent::Finite(_) => (
                monomial_norm_log(space, n),
                monomial_norm_asymptotic_log(space, n).ok(),
                norm_quadrature_log(space, &f, &QuadratureConfig::for_degree(n)),
            ),
            Exponent::Infinite => {
                (monomial_norm_sup_log(space, n), None, norm_sup(space, &f, &SupGrid::default()).map(|e| e.log_value))
            }
        };
        // the space was validated when the config was read
        let exact = exact.expect("closed form on a valid space");
        let (quadrature_log, rel_error, note) = match numeric {
            Ok(q) => {
                let rel = ((q - exact).exp() - 1.0).abs();
                worst = worst.max(rel);
                (Some(q), Some(rel), String::new())
            }
            Err(e) => {
                failures += 1;
                (None, None, e.to_string())
            }
        };
        rows.push(NormRow {
            cell,
            p: p_field(space),
            alpha: space.alpha,
            m: space.m,
            n,
            exact_log: exact,
            asymptotic_log: asymptotic,
            quadrature_log,
            rel_error,
            certified: note.is_empty(),
            note,
        });
    }
    let route = if space.p.is_infinite() { "sup-grid" } else { "quadrature" };
    (rows, NormCellSummary { cell, space: *space, route, max_rel_error: worst, failures })
}

pub fn norms(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    let out = prepare_out(cfg)?;
    let results = run_cells(cfg, |i, s| norm_cell(i, s, cfg.nmax))?;
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for (r, c) in results {
        rows.extend(r);
        cells.push(c);
    }
    let max_rel_error = cells.iter().map(|c| c.max_rel_error).fold(0.0, f64::max);
    let failures = cells.iter().map(|c| c.failures).sum();
    let passed = failures == 0 && max_rel_error <= cfg.tol;
    let summary = NormSummary {
        schema_version: SCHEMA_VERSION,
        command: "norms",
        nmax: cfg.nmax,
        tol: cfg.tol,
        max_rel_error,
        failures,
        passed,
        cells,
    };
    let files = vec![write_csv(out, "norms.csv", &rows)?, write_json(out, "norms_summary.json", &summary)?];
    let failure = (!passed).then(|| {
        format!("{failures} norm computations failed; max relative error {max_rel_error:e} against tol {:e}", cfg.tol)
    });
    Ok(Outcome { files, failure })
}

// ---------------------------------------------------------------- classify

#[derive(Debug, Serialize)]
struct ClaimRow {
    cell: usize,
    p: String,
    alpha: f64,
    m: f64,
    operator: String,
    field: &'static str,
    claim: String,
}

#[derive(Debug, Serialize)]
struct ClassifySummary {
    schema_version: u32,
    command: &'static str,
    records: Vec<Classification>,
}

pub fn classify_cmd(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    let kind = cfg.require_operator()?;
    let records = cfg.cells.iter().map(|s| classify(s, kind)).collect::<fockdyn::Result<Vec<_>>>()?;
    let out = prepare_out(cfg)?;
    let mut rows = Vec::new();
    for (cell, c) in records.iter().enumerate() {
        for (field, claim) in c.fields() {
            rows.push(ClaimRow {
                cell,
                p: p_field(&c.space),
                alpha: c.space.alpha,
                m: c.space.m,
                operator: c.operator.clone(),
                field,
                claim: claim.to_string(),
            });
        }
    }
    let summary = ClassifySummary { schema_version: SCHEMA_VERSION, command: "classify", records };
    let files = vec![write_csv(out, "classify.csv", &rows)?, write_json(out, "classify.json", &summary)?];
    Ok(Outcome { files, failure: None })
}

// ---------------------------------------------------------------- probe

/// One point of a probe series, in long format.
#[derive(Debug, Serialize)]
struct ProbeRow {
    cell: usize,
    p: String,
    alpha: f64,
    m: f64,
    operator: String,
    probe: &'static str,
    series: &'static str,
    n: Option<usize>,
    value: Option<f64>,
    kind: Option<String>,
    certified: bool,
    note: String,
}

#[derive(Debug, Serialize)]
struct CrossCheckCsvRow {
    cell: usize,
    p: String,
    alpha: f64,
    m: f64,
    operator: String,
    field: &'static str,
    claim: String,
    probe: String,
    outcome: String,
    evidence: String,
}

#[derive(Debug, Serialize)]
struct OrbitSummary {
    method: &'static str,
    verdict: OrbitVerdict,
    power_bounded: Verdict,
    sup_log_norm: f64,
    tail_slope: f64,
    all_certified: bool,
}

#[derive(Debug, Serialize)]
struct GelfandSummary {
    extrapolated_radius: f64,
    quasi_nilpotent: bool,
    last_root: f64,
    fit: Option<GelfandFit>,
}

#[derive(Debug, Serialize)]
struct CesaroSummary {
    limit: LimitCandidate,
    rate_exponent: Option<f64>,
    idempotence_residual: f64,
    verdict: Verdict,
}

#[derive(Debug, Serialize)]
struct RittSummary {
    sup_estimate: f64,
    cap: f64,
    verdict: Verdict,
}

#[derive(Debug, Serialize)]
struct HypercyclicitySummary {
    tail_slope: f64,
    log_coefficient: f64,
    trend: Trend,
}

#[derive(Debug, Serialize)]
struct CrossCheckSummary {
    agree: usize,
    disagree: usize,
    inconclusive: usize,
}

#[derive(Debug, Serialize)]
struct ProbeError {
    probe: &'static str,
    message: String,
    computational: bool,
}

#[derive(Debug, Default, Serialize)]
struct ProbeCellSummary {
    cell: usize,
    space: Option<SpaceParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit: Option<OrbitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gelfand: Option<GelfandSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cesaro: Option<CesaroSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ritt: Option<RittSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hypercyclicity: Option<HypercyclicitySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<CrossCheckSummary>,
    aborted: Vec<ProbeError>,
}

#[derive(Debug, Serialize)]
struct ProbeSummary {
    schema_version: u32,
    command: &'static str,
    operator: String,
    nmax: usize,
    ritt_cap: f64,
    probes: Vec<Probe>,
    disagreements: usize,
    aborted: usize,
    computational_failures: usize,
    cells: Vec<ProbeCellSummary>,
}

struct CellProbe<'a> {
    cell: usize,
    space: &'a SpaceParams,
    operator: String,
    rows: Vec<ProbeRow>,
    checks: Vec<CrossCheckCsvRow>,
    summary: ProbeCellSummary,
}

impl CellProbe<'_> {
    fn row(&mut self, probe: Probe, series: &'static str, n: usize, value: f64, kind: BoundKind, certified: bool) {
        self.rows.push(ProbeRow {
            cell: self.cell,
            p: p_field(self.space),
            alpha: self.space.alpha,
            m: self.space.m,
            operator: self.operator.clone(),
            probe: probe.label(),
            series,
            n: Some(n),
            value: Some(value),
            kind: Some(kind.to_string()),
            certified,
            note: String::new(),
        });
    }

    /// A flagged row in place of the series of an aborted probe.
    fn abort(&mut self, probe: Probe, message: String, computational: bool) {
        self.rows.push(ProbeRow {
            cell: self.cell,
            p: p_field(self.space),
            alpha: self.space.alpha,
            m: self.space.m,
            operator: self.operator.clone(),
            probe: probe.label(),
            series: "aborted",
            n: None,
            value: None,
            kind: None,
            certified: false,
            note: message.clone(),
        });
        self.summary.aborted.push(ProbeError { probe: probe.label(), message, computational });
    }

    fn fail(&mut self, probe: Probe, e: Error) {
        let computational = matches!(e, Error::QuadratureBudget { .. } | Error::PowerIteration { .. });
        self.abort(probe, e.to_string(), computational);
    }
}

fn probe_cell<'a>(cell: usize, space: &'a SpaceParams, kind: &OperatorKind, cfg: &ExperimentConfig) -> CellProbe<'a> {
    let mut c = CellProbe {
        cell,
        space,
        operator: kind.label(),
        rows: Vec::new(),
        checks: Vec::new(),
        summary: ProbeCellSummary { cell, space: Some(*space), ..Default::default() },
    };
    let op: Option<CoeffOperator> = kind.coeff_operator();
    for &probe in &cfg.probes {
        let Some(op) = op.as_ref().filter(|_| probe != Probe::CrossCheck) else {
            if probe == Probe::CrossCheck {
                run_cross_check(&mut c, kind, cfg);
            } else {
                c.abort(probe, "no coefficient-space realization of this operator".into(), false);
            }
            continue;
        };
        match probe {
            Probe::Orbit => match iterate_norm_sequence(space, op, cfg.nmax, NormMethod::auto(space, op)) {
                Ok(r) => {
                    for s in &r.norms {
                        c.row(probe, "log_norm", s.n, s.log_value, s.kind, s.certified);
                    }
                    c.summary.orbit = Some(OrbitSummary {
                        method: r.method.label(),
                        verdict: r.verdict,
                        power_bounded: r.power_bounded_verdict(),
                        sup_log_norm: r.sup_log_norm,
                        tail_slope: r.tail_slope,
                        all_certified: r.all_certified(),
                    });
                }
                Err(e) => c.fail(probe, e),
            },
            Probe::Gelfand => match gelfand_estimate(space, op, cfg.nmax) {
                Ok(r) => {
                    for &(n, y) in &r.gelfand {
                        c.row(probe, "log_root_norm", n, y, BoundKind::Exact, true);
                    }
                    c.summary.gelfand = Some(GelfandSummary {
                        extrapolated_radius: r.extrapolated_radius,
                        quasi_nilpotent: r.quasi_nilpotent,
                        last_root: r.gelfand.last().map_or(f64::NAN, |g| g.1.exp()),
                        fit: r.fit,
                    });
                }
                Err(e) => c.fail(probe, e),
            },
            Probe::Cesaro => match cesaro_report(space, op, cfg.nmax) {
                Ok(r) => {
                    for s in &r.cesaro_norms {
                        c.row(probe, "log_distance", s.n, s.log_value, s.kind, s.certified);
                    }
                    for s in &r.cesaro_lower {
                        c.row(probe, "log_distance_lower", s.n, s.log_value, s.kind, s.certified);
                    }
                    c.summary.cesaro = Some(CesaroSummary {
                        limit: r.limit,
                        rate_exponent: r.rate_exponent,
                        idempotence_residual: r.idempotence_residual,
                        verdict: r.ume_verdict,
                    });
                }
                Err(e) => c.fail(probe, e),
            },
            Probe::Ritt => match ritt_sequence(space, op, cfg.nmax, cfg.ritt_cap) {
                Ok(r) => {
                    for s in &r.quantities {
                        c.row(probe, "quantity", s.n, s.value, s.kind, s.certified);
                    }
                    for s in &r.lower {
                        c.row(probe, "quantity_lower", s.n, s.value, s.kind, s.certified);
                    }
                    c.summary.ritt = Some(RittSummary { sup_estimate: r.sup_estimate, cap: r.cap, verdict: r.verdict });
                }
                Err(e) => c.fail(probe, e),
            },
            Probe::Hypercyclicity => {
                if *kind != OperatorKind::Differentiation {
                    c.abort(probe, "the hypercyclicity sequence applies to D only".into(), false);
                    continue;
                }
                match d_hypercyclicity_sequence(space, cfg.nmax) {
                    Ok(r) => {
                        for &(n, v) in &r.values {
                            c.row(probe, "log_ratio", n, v, BoundKind::Exact, true);
                        }
                        c.summary.hypercyclicity = Some(HypercyclicitySummary {
                            tail_slope: r.tail_slope,
                            log_coefficient: r.log_coefficient,
                            trend: r.trend,
                        });
                    }
                    Err(e) => c.fail(probe, e),
                }
            }
            Probe::CrossCheck => unreachable!(),
        }
    }
    c
}

fn run_cross_check(c: &mut CellProbe<'_>, kind: &OperatorKind, cfg: &ExperimentConfig) {
    let settings = CrossCheckSettings { nmax: cfg.nmax, ritt_cap: cfg.ritt_cap };
    match cross_check(c.space, kind, settings) {
        Ok(report) => {
            let mut tally = CrossCheckSummary { agree: 0, disagree: 0, inconclusive: 0 };
            for r in &report.rows {
                match r.outcome {
                    fockdyn::Concordance::Agree => tally.agree += 1,
                    fockdyn::Concordance::Disagree => tally.disagree += 1,
                    fockdyn::Concordance::Inconclusive => tally.inconclusive += 1,
                }
                c.checks.push(CrossCheckCsvRow {
                    cell: c.cell,
                    p: p_field(c.space),
                    alpha: c.space.alpha,
                    m: c.space.m,
                    operator: c.operator.clone(),
                    field: r.field,
                    claim: r.claim.to_string(),
                    probe: r.probe.to_string(),
                    outcome: r.outcome.to_string(),
                    evidence: r.evidence.clone(),
                });
            }
            c.summary.cross_check = Some(tally);
        }
        Err(e) => c.fail(Probe::CrossCheck, e),
    }
}

pub fn probe(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    let kind = cfg.require_operator()?;
    // classification errors (a constant symbol, K with m = 0) are config errors
    for s in &cfg.cells {
        classify(s, kind)?;
    }
    let out = prepare_out(cfg)?;
    let results = run_cells(cfg, |i, s| probe_cell(i, s, kind, cfg))?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut cells = Vec::new();
    for r in results {
        rows.extend(r.rows);
        checks.extend(r.checks);
        cells.push(r.summary);
    }
    let disagreements = cells.iter().filter_map(|c| c.cross_check.as_ref()).map(|t| t.disagree).sum();
    let aborted = cells.iter().map(|c| c.aborted.len()).sum();
    let computational_failures = cells.iter().flat_map(|c| &c.aborted).filter(|e| e.computational).count();
    let summary = ProbeSummary {
        schema_version: SCHEMA_VERSION,
        command: "probe",
        operator: kind.label(),
        nmax: cfg.nmax,
        ritt_cap: cfg.ritt_cap,
        probes: cfg.probes.clone(),
        disagreements,
        aborted,
        computational_failures,
        cells,
    };
    let mut files = vec![write_csv(out, "probes.csv", &rows)?];
    if cfg.probes.contains(&Probe::CrossCheck) {
        files.push(write_csv(out, "cross_check.csv", &checks)?);
    }
    files.push(write_json(out, "probe_summary.json", &summary)?);
    let failure = (computational_failures > 0).then(|| format!("{computational_failures} probes failed to compute"));
    Ok(Outcome { files, failure })
}

// ---------------------------------------------------------------- report

#[derive(Debug, Serialize)]
struct ArtifactEntry {
    file: String,
    rows: usize,
}

#[derive(Debug, Serialize)]
struct Report {
    schema_version: u32,
    command: &'static str,
    artifacts: Vec<ArtifactEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norms: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classify: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe: Option<serde_json::Value>,
}

const CSV_ARTIFACTS: [&str; 4] = ["norms.csv", "classify.csv", "probes.csv", "cross_check.csv"];

fn read_summary(dir: &Path, name: &str) -> anyhow::Result<Option<serde_json::Value>> {
    let path = dir.join(name);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let version = v.get("schema_version").and_then(|x| x.as_u64());
    if version != Some(SCHEMA_VERSION as u64) {
        anyhow::bail!("{} has schema_version {version:?}, expected {SCHEMA_VERSION}", path.display());
    }
    Ok(Some(v))
}

fn pick(v: &serde_json::Value, keys: &[&str]) -> serde_json::Value {
    let mut out = serde_json::Map::new();
    for &k in keys {
        if let Some(x) = v.get(k) {
            out.insert(k.to_string(), x.clone());
        }
    }
    serde_json::Value::Object(out)
}

/// Aggregates whatever artifacts are present in `dir` into `report.json`.
pub fn report(dir: &Path) -> anyhow::Result<Outcome> {
    let mut artifacts = Vec::new();
    for name in CSV_ARTIFACTS {
        let path = dir.join(name);
        if path.exists() {
            artifacts.push(ArtifactEntry { file: name.to_string(), rows: count_csv_rows(&path)? });
        }
    }
    let norms = read_summary(dir, "norms_summary.json")?;
    let classify = read_summary(dir, "classify.json")?;
    let probe = read_summary(dir, "probe_summary.json")?;
    if artifacts.is_empty() && norms.is_none() && classify.is_none() && probe.is_none() {
        anyhow::bail!("no artifacts to aggregate in {}", dir.display());
    }
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "report",
        artifacts,
        norms: norms.map(|v| pick(&v, &["nmax", "tol", "max_rel_error", "failures", "passed"])),
        classify: classify.map(|v| {
            let records = v.get("records").and_then(|r| r.as_array()).map_or(0, |r| r.len());
            serde_json::json!({ "records": records })
        }),
        probe: probe.map(|v| pick(&v, &["operator", "nmax", "disagreements", "aborted", "computational_failures"])),
    };
    let files = vec![write_json(dir, "report.json", &report)?];
    Ok(Outcome { files, failure: None })
}
