//! Closed-form characterizations of the operators, and their comparison
//! with numerical probes.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{cesaro_report, iterate_norm_sequence, ritt_sequence, NormMethod, Verdict};
use crate::error::{Error, Result};
use crate::norms::{shift_norm_exact_p2, IndexCap};
use crate::operators::{CoeffOperator, OperatorKind, SymbolPolynomial};
use crate::space::{Exponent, SpaceParams};

/// What is known about one property of an operator on one space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    True,
    False,
    /// Only a necessary condition is known, and it holds.
    NecessaryOnly,
    NotCovered,
}

impl Claim {
    fn from_bool(b: bool) -> Self {
        if b {
            Claim::True
        } else {
            Claim::False
        }
    }

    fn decided(self) -> Option<bool> {
        match self {
            Claim::True => Some(true),
            Claim::False => Some(false),
            _ => None,
        }
    }
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Claim::True => "true",
            Claim::False => "false",
            Claim::NecessaryOnly => "necessary-only",
            Claim::NotCovered => "not-covered",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub operator: String,
    pub space: SpaceParams,
    pub bounded: Claim,
    pub compact: Claim,
    pub hypercyclic: Claim,
    pub supercyclic: Claim,
    pub cyclic: Claim,
    pub power_bounded: Claim,
    pub uniformly_mean_ergodic: Claim,
    pub ritt: Claim,
    /// Exact operator norm, when known.
    pub norm: Option<f64>,
    pub norm_bound: Option<f64>,
    pub spectral_radius: Option<f64>,
    pub citations: Vec<String>,
}

impl Classification {
    fn not_covered(operator: String, space: &SpaceParams) -> Self {
        Self {
            operator,
            space: *space,
            bounded: Claim::NotCovered,
            compact: Claim::NotCovered,
            hypercyclic: Claim::NotCovered,
            supercyclic: Claim::NotCovered,
            cyclic: Claim::NotCovered,
            power_bounded: Claim::NotCovered,
            uniformly_mean_ergodic: Claim::NotCovered,
            ritt: Claim::NotCovered,
            norm: None,
            norm_bound: None,
            spectral_radius: None,
            citations: Vec::new(),
        }
    }

    fn unbounded(operator: String, space: &SpaceParams, citation: &str) -> Self {
        let mut c = Self::not_covered(operator, space);
        c.bounded = Claim::False;
        c.compact = Claim::False;
        c.citations.push(citation.into());
        c
    }

    pub fn fields(&self) -> [(&'static str, Claim); 8] {
        [
            ("bounded", self.bounded),
            ("compact", self.compact),
            ("hypercyclic", self.hypercyclic),
            ("supercyclic", self.supercyclic),
            ("cyclic", self.cyclic),
            ("power_bounded", self.power_bounded),
            ("uniformly_mean_ergodic", self.uniformly_mean_ergodic),
            ("ritt", self.ritt),
        ]
    }

    /// hypercyclic ⇒ supercyclic ⇒ cyclic, compact ⇒ not hypercyclic, and
    /// unbounded ⇒ nothing dynamical is claimed.
    pub fn implications_hold(&self) -> bool {
        let chain = (self.hypercyclic != Claim::True || self.supercyclic == Claim::True)
            && (self.supercyclic != Claim::True || self.cyclic == Claim::True);
        let compact = self.compact != Claim::True || self.hypercyclic == Claim::False;
        let unbounded = self.bounded != Claim::False || self.fields()[2..].iter().all(|(_, c)| *c == Claim::NotCovered);
        chain && compact && unbounded
    }
}

/// The differentiation operator `D` on `F^p_(α, m)`, `1 ≤ p < ∞`.
pub fn classify_differentiation(space: &SpaceParams) -> Classification {
    let name = "D".to_string();
    let Exponent::Finite(p) = space.p else {
        let mut c = Classification::not_covered(name, space);
        c.citations.push("differentiation: results stated for finite p only".into());
        return c;
    };
    let (alpha, m) = (space.alpha, space.m);
    if m > 1.0 {
        return Classification::unbounded(name, space, "differentiation: bounded iff m <= 1 (monomial norm growth)");
    }
    let hypercyclic = m == 1.0 && (alpha > 1.0 || (alpha == 1.0 && p > 3.0));
    let regular = m < 1.0 || (m == 1.0 && alpha < 1.0);
    let mut c = Classification::not_covered(name, space);
    c.bounded = Claim::True;
    c.compact = Claim::from_bool(m < 1.0);
    c.hypercyclic = Claim::from_bool(hypercyclic);
    c.supercyclic = Claim::True;
    c.cyclic = Claim::True;
    c.power_bounded = if regular {
        Claim::True
    } else if hypercyclic {
        Claim::False
    } else {
        Claim::NotCovered
    };
    c.uniformly_mean_ergodic = Claim::from_bool(regular);
    c.ritt = Claim::from_bool(regular);
    c.citations = vec![
        "differentiation: bounded iff m <= 1, compact iff m < 1".into(),
        "differentiation: hypercyclic iff m = 1 and (alpha > 1, or alpha = 1 and p > 3)".into(),
        "differentiation: always supercyclic, hence cyclic, when bounded".into(),
        "differentiation: power bounded and uniformly mean ergodic iff m < 1, or m = 1 and alpha < 1".into(),
        "differentiation: Ritt condition iff power bounded and uniformly mean ergodic".into(),
    ];
    if hypercyclic {
        c.citations.push("a power bounded operator has bounded orbits and is not hypercyclic".into());
    }
    if m == 1.0 && alpha == 1.0 {
        c.citations.push("boundary alpha = 1: hypercyclicity threshold p > 3 is strict".into());
    }
    c
}

/// Volterra-type operator `V_g` for a non-constant polynomial symbol.
pub fn classify_volterra(space: &SpaceParams, g: &SymbolPolynomial) -> Result<Classification> {
    if g.is_constant() {
        return Err(Error::InvalidArgument("Volterra symbol must be a non-constant polynomial".into()));
    }
    let name = OperatorKind::Volterra(g.clone()).label();
    Ok(volterra_claims(name, space, g))
}

fn volterra_claims(name: String, space: &SpaceParams, g: &SymbolPolynomial) -> Classification {
    let l = g.degree();
    let lf = l as f64;
    let (alpha, m) = (space.alpha, space.m);
    let a = g.leading_coeff().norm();
    if lf > m {
        return Classification::unbounded(name, space, "Volterra: bounded iff deg g <= m");
    }
    let finite_p = !space.p.is_infinite();
    let compact = lf < m || space.integer_m().is_none();
    let mut c = Classification::not_covered(name, space);
    c.bounded = Claim::True;
    c.compact = Claim::from_bool(compact);
    c.citations.push("Volterra: bounded iff deg g <= m, compact iff deg g < m or m is not an integer".into());
    if finite_p {
        c.hypercyclic = Claim::False;
        c.supercyclic = Claim::False;
        c.citations.push("Volterra: V_g f(0) = 0, so V_g is not supercyclic".into());
        if g.is_monomial_plus_constant() {
            c.cyclic = Claim::from_bool(l == 1);
            c.citations.push("Volterra: for g = a z^l + b, cyclic iff l = 1".into());
        }
    } else if compact {
        c.hypercyclic = Claim::False;
        c.citations.push("compact operators are not hypercyclic".into());
    }
    if lf < m {
        c.power_bounded = Claim::True;
        c.uniformly_mean_ergodic = Claim::True;
        c.spectral_radius = Some(0.0);
        c.citations
            .push("Volterra: deg g < m gives compact, quasi-nilpotent, power bounded, uniformly mean ergodic".into());
        return c;
    }
    // l = m, an integer
    if !g.is_monomial_plus_constant() {
        c.citations.push("uniform mean ergodicity refers to the leading monomial part a_l z^l".into());
    }
    if finite_p {
        c.power_bounded = if a > alpha { Claim::False } else { Claim::NecessaryOnly };
        c.uniformly_mean_ergodic = if a < alpha { Claim::NecessaryOnly } else { Claim::NotCovered };
        c.citations.push("Volterra, deg g = m, finite p: power bounded requires |a_l| <= alpha".into());
        c.citations.push(
            "Volterra, deg g = m, finite p: power bounded and uniformly mean ergodic requires |a_l| < alpha".into(),
        );
    } else {
        c.power_bounded = Claim::from_bool(a <= alpha);
        c.uniformly_mean_ergodic = if a <= alpha { Claim::from_bool(a < alpha) } else { Claim::NotCovered };
        c.norm_bound = Some(a / alpha);
        c.citations.push("Volterra, deg g = m, p = inf: power bounded iff |a_l| <= alpha".into());
        c.citations
            .push("Volterra, deg g = m, p = inf, |a_l| <= alpha: uniformly mean ergodic iff |a_l| < alpha".into());
        c.citations.push("Volterra, deg g = m, p = inf: ||V_{a_l z^l}|| <= |a_l| / alpha".into());
    }
    if a == alpha {
        c.citations.push("boundary |a_l| = alpha".into());
    }
    c.spectral_radius = Some(a / alpha);
    c
}

/// The integration operator `J = V_z`.
pub fn classify_integration(space: &SpaceParams) -> Classification {
    volterra_claims("J".into(), space, &SymbolPolynomial::from_real(&[0.0, 1.0]))
}

/// The Hardy operator, `1 ≤ p < ∞`.
pub fn classify_hardy(space: &SpaceParams) -> Classification {
    let mut c = Classification::not_covered("H".into(), space);
    if space.p.is_infinite() {
        c.citations.push("Hardy: results stated for finite p only".into());
        return c;
    }
    c.bounded = Claim::True;
    c.norm = Some(1.0);
    c.spectral_radius = Some(1.0);
    c.hypercyclic = Claim::False;
    c.supercyclic = Claim::False;
    c.power_bounded = Claim::True;
    c.uniformly_mean_ergodic = Claim::True;
    c.ritt = Claim::True;
    c.citations = vec![
        "Hardy: ||H|| = 1, power bounded and uniformly mean ergodic".into(),
        "Hardy: not supercyclic, since H fixes constants and is power bounded".into(),
        "Hardy: Ritt resolvent condition".into(),
    ];
    c
}

/// `K_λ`; at `λ = 0` this is `V_{a z^m}`.
pub fn classify_k_lambda(space: &SpaceParams, a: Complex64, lambda: Complex64, m: u32) -> Result<Classification> {
    let kind = OperatorKind::KLambda { a, lambda, m };
    if m == 0 {
        return Err(Error::InvalidArgument("K_lambda needs a positive integer m".into()));
    }
    if lambda == Complex64::new(0.0, 0.0) && a != Complex64::new(0.0, 0.0) {
        let g = SymbolPolynomial::monomial(m as usize, a);
        let mut c = volterra_claims(kind.label(), space, &g);
        c.citations.push("K_0 is the Volterra operator with symbol a z^m".into());
        return Ok(c);
    }
    let mut c = Classification::not_covered(kind.label(), space);
    if space.p.is_infinite() && space.integer_m() == Some(m) && lambda.norm() < space.alpha {
        c.bounded = Claim::True;
        c.norm_bound = Some(k_lambda_norm_bound(a, lambda, space.alpha)?);
        c.citations.push("K_lambda on p = inf: ||K_lambda|| <= |a| / (alpha - |lambda|) for |lambda| < alpha".into());
    }
    Ok(c)
}

pub fn classify(space: &SpaceParams, kind: &OperatorKind) -> Result<Classification> {
    space.validate()?;
    match kind {
        OperatorKind::Differentiation => Ok(classify_differentiation(space)),
        OperatorKind::Integration => Ok(classify_integration(space)),
        OperatorKind::Hardy => Ok(classify_hardy(space)),
        OperatorKind::Volterra(g) => classify_volterra(space, g),
        OperatorKind::KLambda { a, lambda, m } => classify_k_lambda(space, *a, *lambda, *m),
    }
}

/// `|a_l| / α` for `deg g = m`.
pub fn volterra_spectrum_radius(space: &SpaceParams, g: &SymbolPolynomial) -> Result<f64> {
    space.validate()?;
    let l = g.degree();
    if g.is_constant() || space.integer_m() != Some(l as u32) {
        return Err(Error::InvalidArgument(format!(
            "spectral radius formula needs deg g = m, got deg g = {l}, m = {}",
            space.m
        )));
    }
    Ok(g.leading_coeff().norm() / space.alpha)
}

/// `|a| / (α − |λ|)`.
pub fn k_lambda_norm_bound(a: Complex64, lambda: Complex64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidSpace(format!("alpha must be > 0, got {alpha}")));
    }
    if lambda.norm() >= alpha {
        return Err(Error::InvalidArgument(format!("|lambda| = {} must be below alpha = {alpha}", lambda.norm())));
    }
    Ok(a.norm() / (alpha - lambda.norm()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Concordance {
    Agree,
    Disagree,
    Inconclusive,
}

impl std::fmt::Display for Concordance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Concordance::Agree => "AGREE",
            Concordance::Disagree => "DISAGREE",
            Concordance::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckRow {
    pub field: &'static str,
    pub claim: Claim,
    pub probe: Verdict,
    pub outcome: Concordance,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub classification: Classification,
    pub rows: Vec<CrossCheckRow>,
}

impl CrossCheckReport {
    pub fn disagreements(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome == Concordance::Disagree).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheckSettings {
    pub nmax: usize,
    pub ritt_cap: f64,
}

impl Default for CrossCheckSettings {
    fn default() -> Self {
        Self { nmax: 100, ritt_cap: 1e3 }
    }
}

fn compare(claim: Claim, probe: Verdict) -> Concordance {
    let probe = match probe {
        Verdict::True => Some(true),
        Verdict::False => Some(false),
        Verdict::Inconclusive => None,
    };
    match (claim.decided(), probe) {
        (Some(c), Some(p)) if c == p => Concordance::Agree,
        (Some(_), Some(_)) => Concordance::Disagree,
        _ => Concordance::Inconclusive,
    }
}

fn probe_or_inconclusive(r: Result<(Verdict, String)>) -> (Verdict, String) {
    r.unwrap_or_else(|e| (Verdict::Inconclusive, format!("probe failed: {e}")))
}

/// Runs the probes that bear on boundedness, power boundedness, uniform
/// mean ergodicity and the Ritt condition, and compares each decided claim
/// with the probe verdict. The classification is reported unchanged.
pub fn cross_check(space: &SpaceParams, kind: &OperatorKind, settings: CrossCheckSettings) -> Result<CrossCheckReport> {
    let classification = classify(space, kind)?;
    let op = kind.coeff_operator();
    let p2 = space.p.finite() == Some(2.0);
    let mut probes: Vec<(&'static str, Claim, (Verdict, String))> = Vec::new();
    let none = |why: &str| (Verdict::Inconclusive, why.to_string());

    let Some(op) = op else {
        for (field, claim) in [
            ("bounded", classification.bounded),
            ("power_bounded", classification.power_bounded),
            ("uniformly_mean_ergodic", classification.uniformly_mean_ergodic),
            ("ritt", classification.ritt),
        ] {
            probes.push((field, claim, none("no coefficient-space probe for this operator")));
        }
        return Ok(finish(classification, probes));
    };

    let bounded = if p2 && op.single_term().is_some() {
        probe_or_inconclusive(shift_norm_exact_p2(space, &op, 1, IndexCap::default()).map(|r| {
            if r.log_norm == f64::INFINITY {
                (Verdict::False, "weighted-shift entries diverge".into())
            } else if r.certified {
                (Verdict::True, format!("||T|| = {:.6e}", r.log_norm.exp()))
            } else {
                (Verdict::Inconclusive, "uncertified norm".into())
            }
        }))
    } else {
        none("no certified norm route")
    };
    let unbounded = bounded.0 == Verdict::False || classification.bounded == Claim::False;
    probes.push(("bounded", classification.bounded, bounded));

    if unbounded {
        for (field, claim) in [
            ("power_bounded", classification.power_bounded),
            ("uniformly_mean_ergodic", classification.uniformly_mean_ergodic),
            ("ritt", classification.ritt),
        ] {
            probes.push((field, claim, none("operator is unbounded")));
        }
        return Ok(finish(classification, probes));
    }

    let orbit = probe_or_inconclusive(
        iterate_norm_sequence(space, &op, settings.nmax, NormMethod::auto(space, &op)).map(|r| {
            let evidence = format!("orbit {} by {}, tail slope {:.4}", r.verdict, r.method.label(), r.tail_slope);
            (r.power_bounded_verdict(), evidence)
        }),
    );
    probes.push(("power_bounded", classification.power_bounded, orbit));

    let ergodic = if p2 {
        probe_or_inconclusive(cesaro_report(space, &op, settings.nmax).map(|r| {
            let rate = r.rate_exponent.map_or("n/a".to_string(), |b| format!("{b:.3}"));
            (r.ume_verdict, format!("Cesàro rate exponent {rate}"))
        }))
    } else {
        none("operator-level Cesàro norms need p = 2")
    };
    probes.push(("uniformly_mean_ergodic", classification.uniformly_mean_ergodic, ergodic));

    let ritt = if p2 {
        probe_or_inconclusive(
            ritt_sequence(space, &op, settings.nmax, settings.ritt_cap)
                .map(|r| (r.verdict, format!("sup n||T^(n+1) - T^n|| = {:.4e}", r.sup_estimate))),
        )
    } else {
        none("Ritt quantities need p = 2")
    };
    probes.push(("ritt", classification.ritt, ritt));
    Ok(finish(classification, probes))
}

fn finish(classification: Classification, probes: Vec<(&'static str, Claim, (Verdict, String))>) -> CrossCheckReport {
    let rows = probes
        .into_iter()
        .map(|(field, claim, (probe, evidence))| CrossCheckRow {
            field,
            claim,
            probe,
            outcome: compare(claim, probe),
            evidence,
        })
        .collect();
    CrossCheckReport { classification, rows }
}

/// The coefficient operator named by `kind`, or an error for `K_λ`.
pub fn probe_operator(kind: &OperatorKind) -> Result<CoeffOperator> {
    kind.coeff_operator()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no coefficient-space probe", kind.label())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiation_examples() {
        let c = classify_differentiation(&SpaceParams::finite(2.0, 1.5, 1.0));
        assert_eq!((c.hypercyclic, c.power_bounded), (Claim::True, Claim::False));
        let c = classify_differentiation(&SpaceParams::finite(2.0, 0.5, 1.0));
        assert_eq!((c.hypercyclic, c.power_bounded, c.ritt), (Claim::False, Claim::True, Claim::True));
        let c = classify_differentiation(&SpaceParams::finite(2.0, 1.0, 0.5));
        assert_eq!(
            (c.bounded, c.compact, c.power_bounded, c.hypercyclic),
            (Claim::True, Claim::True, Claim::True, Claim::False)
        );
        let c = classify_differentiation(&SpaceParams::sup(1.0, 1.0));
        assert!(c.fields().iter().all(|(_, v)| *v == Claim::NotCovered));
    }

    #[test]
    fn volterra_examples() {
        let g = SymbolPolynomial::from_real(&[0.0, 0.5]);
        let c = classify_volterra(&SpaceParams::sup(1.0, 1.0), &g).unwrap();
        assert_eq!((c.power_bounded, c.uniformly_mean_ergodic), (Claim::True, Claim::True));
        let z = SymbolPolynomial::from_real(&[0.0, 1.0]);
        let c = classify_volterra(&SpaceParams::sup(1.0, 1.0), &z).unwrap();
        assert_eq!((c.power_bounded, c.uniformly_mean_ergodic), (Claim::True, Claim::False));
        let c = classify_volterra(&SpaceParams::finite(2.0, 1.0, 2.0), &z).unwrap();
        assert_eq!((c.compact, c.power_bounded, c.spectral_radius), (Claim::True, Claim::True, Some(0.0)));
        let c = classify_volterra(&SpaceParams::finite(2.0, 1.0, 1.0), &SymbolPolynomial::from_real(&[0.0, 0.0, 1.0]))
            .unwrap();
        assert_eq!(c.bounded, Claim::False);
        assert!(c.fields()[2..].iter().all(|(_, v)| *v == Claim::NotCovered));
        assert!(classify_volterra(&SpaceParams::finite(2.0, 1.0, 1.0), &SymbolPolynomial::from_real(&[3.0])).is_err());
    }

    #[test]
    fn integration_examples() {
        let c = classify_integration(&SpaceParams::sup(2.0, 1.0));
        assert_eq!((c.power_bounded, c.uniformly_mean_ergodic), (Claim::True, Claim::True));
        let c = classify_integration(&SpaceParams::finite(2.0, 1.0, 1.0));
        assert_eq!(c.power_bounded, Claim::NecessaryOnly);
        let c = classify_integration(&SpaceParams::finite(1.0, 1.0, 3.0));
        assert_eq!((c.compact, c.power_bounded), (Claim::True, Claim::True));
    }

    #[test]
    fn hardy_examples() {
        for space in [SpaceParams::finite(2.0, 0.5, 2.0), SpaceParams::finite(1.0, 1.0, 1.0)] {
            let c = classify_hardy(&space);
            assert_eq!((c.power_bounded, c.uniformly_mean_ergodic, c.ritt), (Claim::True, Claim::True, Claim::True));
            assert_eq!(c.norm, Some(1.0));
            assert_eq!(c.supercyclic, Claim::False);
        }
    }

    #[test]
    fn radius_and_bounds() {
        let s = SpaceParams::finite(2.0, 1.0, 1.0);
        assert_eq!(volterra_spectrum_radius(&s, &SymbolPolynomial::from_real(&[0.0, 0.3])).unwrap(), 0.3);
        let s2 = SpaceParams::finite(2.0, 2.0, 2.0);
        assert_eq!(volterra_spectrum_radius(&s2, &SymbolPolynomial::from_real(&[0.0, 0.0, 4.0])).unwrap(), 2.0);
        assert_eq!(volterra_spectrum_radius(&s, &SymbolPolynomial::from_real(&[0.0, 1.0])).unwrap(), 1.0);
        assert!(volterra_spectrum_radius(&s2, &SymbolPolynomial::from_real(&[0.0, 1.0])).is_err());
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(k_lambda_norm_bound(c(1.0), c(0.0), 2.0).unwrap(), 0.5);
        assert_eq!(k_lambda_norm_bound(c(2.0), c(0.5), 1.0).unwrap(), 4.0);
        assert_eq!(k_lambda_norm_bound(c(0.0), c(0.3), 1.0).unwrap(), 0.0);
        assert!(k_lambda_norm_bound(c(1.0), c(1.0), 1.0).is_err());
    }
}
