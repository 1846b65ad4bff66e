//! The experiment configuration file.
//!
//! A flat TOML document. Every key except `schema_version` and the grid is
//! optional; command-line flags override the file.
//!
//! ```toml
//! schema_version = 1
//! p = [1, 2, "inf"]
//! alpha = [0.5, 1.0]
//! m = [1.0, 2.0]
//! operator = "V(0; 0.3)"   # D, J, H, V(g_0; g_1; ...), K(a; lambda; m)
//! probes = ["orbit", "gelfand", "cesaro", "ritt", "hypercyclicity", "cross-check"]
//! nmax = 100
//! ritt_cap = 1e3
//! tol = 1e-8
//! jobs = 0                 # 0: one worker per core
//! out = "artifacts"
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use fockdyn::{Exponent, OperatorKind, SpaceParams};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawExponent {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Probe {
    Orbit,
    Gelfand,
    Cesaro,
    Ritt,
    Hypercyclicity,
    CrossCheck,
}

impl Probe {
    pub const ALL: [Probe; 6] =
        [Probe::Orbit, Probe::Gelfand, Probe::Cesaro, Probe::Ritt, Probe::Hypercyclicity, Probe::CrossCheck];

    pub fn label(self) -> &'static str {
        match self {
            Probe::Orbit => "orbit",
            Probe::Gelfand => "gelfand",
            Probe::Cesaro => "cesaro",
            Probe::Ritt => "ritt",
            Probe::Hypercyclicity => "hypercyclicity",
            Probe::CrossCheck => "cross-check",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: u32,
    p: Vec<RawExponent>,
    alpha: Vec<f64>,
    m: Vec<f64>,
    operator: Option<String>,
    probes: Option<Vec<Probe>>,
    nmax: Option<usize>,
    ritt_cap: Option<f64>,
    tol: Option<f64>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Grid cells in `p`-major, then `alpha`, then `m` order.
    pub cells: Vec<SpaceParams>,
    pub operator: Option<OperatorKind>,
    pub probes: Vec<Probe>,
    pub nmax: usize,
    pub ritt_cap: f64,
    pub tol: f64,
    pub jobs: usize,
    pub out: PathBuf,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub nmax: Option<usize>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text, overrides).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str, overrides: &Overrides) -> anyhow::Result<Self> {
        let raw: RawConfig = toml::from_str(text)?;
        if raw.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema_version {} (expected {SCHEMA_VERSION})", raw.schema_version);
        }
        let ps = raw
            .p
            .iter()
            .map(|v| match v {
                RawExponent::Number(p) => Ok(Exponent::Finite(*p)),
                RawExponent::Text(s) => s.parse::<Exponent>().map_err(anyhow::Error::from),
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let mut cells = Vec::with_capacity(ps.len() * raw.alpha.len() * raw.m.len());
        for &p in &ps {
            for &alpha in &raw.alpha {
                for &m in &raw.m {
                    cells.push(SpaceParams::new(p, alpha, m)?);
                }
            }
        }
        if cells.is_empty() {
            bail!("the space grid is empty: p, alpha and m each need at least one value");
        }
        let operator = raw.operator.as_deref().map(str::parse::<OperatorKind>).transpose()?;
        let mut probes = raw.probes.unwrap_or_else(|| Probe::ALL.to_vec());
        probes.sort();
        probes.dedup();
        let nmax = overrides.nmax.or(raw.nmax).unwrap_or(100);
        if nmax == 0 {
            bail!("nmax must be positive");
        }
        let tol = overrides.tol.or(raw.tol).unwrap_or(1e-8);
        if !(tol > 0.0) {
            bail!("tol must be positive, got {tol}");
        }
        let ritt_cap = raw.ritt_cap.unwrap_or(1e3);
        if !(ritt_cap > 0.0) {
            bail!("ritt_cap must be positive, got {ritt_cap}");
        }
        Ok(Self {
            cells,
            operator,
            probes,
            nmax,
            ritt_cap,
            tol,
            jobs: overrides.jobs.or(raw.jobs).unwrap_or(0),
            out: overrides.out.clone().or(raw.out).unwrap_or_else(|| PathBuf::from("artifacts")),
        })
    }

    pub fn require_operator(&self) -> anyhow::Result<&OperatorKind> {
        self.operator.as_ref().context("this command needs an `operator` key")
    }
}
