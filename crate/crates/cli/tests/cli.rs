use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fockdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockdyn")).args(args).output().expect("spawn fockdyn")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, format!("schema_version = 1\n{body}")).unwrap();
    path.to_str().unwrap().to_string()
}

fn run_ok(command: &str, config: &str, out: &Path, extra: &[&str]) {
    let mut args = vec![command, "--config", config, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = fockdyn(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn norms_on_the_classical_fock_space_meet_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "p = [2]\nalpha = [0.5]\nm = [2]\nnmax = 60");
    run_ok("norms", &cfg, dir.path(), &[]);
    let s = json(&dir.path().join("norms_summary.json"));
    assert_eq!(s["schema_version"], 1);
    assert!(s["max_rel_error"].as_f64().unwrap() < 1e-8);
    let csv = std::fs::read_to_string(dir.path().join("norms.csv")).unwrap();
    assert_eq!(csv.lines().count(), 62);
    assert!(csv.starts_with("cell,p,alpha,m,n,exact_log,asymptotic_log,quadrature_log,rel_error,certified,note\n"));
}

#[test]
fn norms_on_sup_space_use_the_sup_route() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "p = [\"inf\"]\nalpha = [1]\nm = [1]\nnmax = 40");
    run_ok("norms", &cfg, dir.path(), &[]);
    let s = json(&dir.path().join("norms_summary.json"));
    assert_eq!(s["cells"][0]["route"], "sup-grid");
    assert!(s["max_rel_error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn config_errors_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write_config(dir.path(), "e.toml", "p = []\nalpha = [1]\nm = [1]");
    let o = fockdyn(&["norms", "--config", &empty]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid is empty"));

    let no_op = write_config(dir.path(), "n.toml", "p = [2]\nalpha = [1]\nm = [1]");
    assert_eq!(fockdyn(&["classify", "--config", &no_op]).status.code(), Some(2));
    assert_eq!(fockdyn(&["probe", "--config", &no_op]).status.code(), Some(2));
    assert_eq!(fockdyn(&["norms", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(fockdyn(&["report", "--out", dir.path().join("nothing").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(fockdyn(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unmet_tolerance_exits_with_status_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "p = [1]\nalpha = [1]\nm = [1]\nnmax = 10");
    let o = fockdyn(&["norms", "--config", &cfg, "--out", dir.path().to_str().unwrap(), "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(dir.path().join("norms.csv").exists());
}

#[test]
fn classify_differentiation_regimes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "p = [2]\nalpha = [0.5, 1, 1.5]\nm = [1]\noperator = \"D\"");
    run_ok("classify", &cfg, dir.path(), &[]);
    let s = json(&dir.path().join("classify.json"));
    let records = s["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert_eq!(records[0]["power_bounded"], "true");
    assert_eq!(records[0]["hypercyclic"], "false");
    assert_eq!(records[1]["hypercyclic"], "false");
    assert_eq!(records[2]["hypercyclic"], "true");
    assert_eq!(records[2]["power_bounded"], "false");
    assert!(records.iter().all(|r| !r["citations"].as_array().unwrap().is_empty()));
}

#[test]
fn classify_unbounded_volterra() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "p = [2]\nalpha = [1]\nm = [1]\noperator = \"V(0; 0; 1)\"");
    run_ok("classify", &cfg, dir.path(), &[]);
    let r = &json(&dir.path().join("classify.json"))["records"][0];
    assert_eq!(r["bounded"], "false");
    for field in ["hypercyclic", "supercyclic", "cyclic", "power_bounded", "uniformly_mean_ergodic", "ritt"] {
        assert_eq!(r[field], "not-covered", "{field}");
    }
}

#[test]
fn hardy_classification_is_constant_over_a_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "p = [1, 2, 5]\nalpha = [0.5, 2]\nm = [0.5, 3]\noperator = \"H\"");
    run_ok("classify", &cfg, dir.path(), &[]);
    let csv = std::fs::read_to_string(dir.path().join("classify.csv")).unwrap();
    let claims: std::collections::BTreeSet<(String, String)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[5].to_string(), f[6].to_string())
        })
        .collect();
    assert_eq!(claims.len(), 8, "{claims:?}");
}

#[test]
fn probe_examples() {
    let dir = tempfile::tempdir().unwrap();
    let v = write_config(
        dir.path(),
        "v.toml",
        "p = [2]\nalpha = [1]\nm = [1]\noperator = \"V(0; 0.3)\"\nprobes = [\"gelfand\"]",
    );
    let out = dir.path().join("v");
    run_ok("probe", &v, &out, &["--nmax", "100"]);
    let r = json(&out.join("probe_summary.json"))["cells"][0]["gelfand"]["extrapolated_radius"].as_f64().unwrap();
    assert!((0.285..=0.315).contains(&r), "{r}");

    let h = write_config(dir.path(), "h.toml", "p = [2]\nalpha = [1]\nm = [2]\noperator = \"H\"\nprobes = [\"ritt\"]");
    let out = dir.path().join("h");
    run_ok("probe", &h, &out, &["--nmax", "50"]);
    let ritt = &json(&out.join("probe_summary.json"))["cells"][0]["ritt"];
    assert_eq!(ritt["verdict"], "true");
    assert!(ritt["sup_estimate"].as_f64().unwrap() <= 0.25);

    let d = write_config(
        dir.path(),
        "d.toml",
        "p = [2]\nalpha = [1.2]\nm = [1]\noperator = \"D\"\nprobes = [\"orbit\", \"cross-check\"]",
    );
    let out = dir.path().join("d");
    run_ok("probe", &d, &out, &["--nmax", "100"]);
    let s = json(&out.join("probe_summary.json"));
    assert_eq!(s["cells"][0]["orbit"]["verdict"], "growing");
    assert_eq!(s["disagreements"], 0);
}

#[test]
fn inapplicable_probes_leave_flagged_rows() {
    let dir = tempfile::tempdir().unwrap();
    let k = write_config(dir.path(), "k.toml", "p = [\"inf\"]\nalpha = [1]\nm = [1]\noperator = \"K(1; 0.5; 1)\"");
    run_ok("probe", &k, dir.path(), &["--nmax", "20"]);
    let csv = std::fs::read_to_string(dir.path().join("probes.csv")).unwrap();
    let aborted: Vec<&str> = csv.lines().filter(|l| l.contains(",aborted,")).collect();
    assert_eq!(aborted.len(), 5);
    assert!(aborted.iter().all(|l| l.contains(",false,")));
    let s = json(&dir.path().join("probe_summary.json"));
    assert_eq!(s["computational_failures"], 0);
}

#[test]
fn worker_count_does_not_change_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        "p = [1, 2, \"inf\"]\nalpha = [0.8, 1.5]\nm = [1]\noperator = \"D\"\nnmax = 30",
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, jobs) in [(&a, "1"), (&b, "4")] {
        run_ok("norms", &cfg, out, &["--jobs", jobs]);
        run_ok("classify", &cfg, out, &["--jobs", jobs]);
        run_ok("probe", &cfg, out, &["--jobs", jobs]);
        let o = fockdyn(&["report", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for name in [
        "norms.csv",
        "norms_summary.json",
        "classify.csv",
        "classify.json",
        "probes.csv",
        "cross_check.csv",
        "probe_summary.json",
        "report.json",
    ] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
}
