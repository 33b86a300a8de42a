use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BALL: &str = "[shape]\nkind = \"sphere\"\nradius = 1.0\n";

fn willmore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_willmore")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("scenario.cfg");
    std::fs::write(&path, text).unwrap();
    path
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    willmore(&args)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn inadmissible_parameters_exit_with_two() {
    let dir = TempDir::new().unwrap();
    for params in [
        "{ beta = 2.0, c = -2.0, d = 1.0 }",
        "{ beta = 2.0, c = 1.0, d = -0.5 }",
        "{ beta = 0.25, c = 1.0, d = 0.0 }",
    ] {
        let cfg = write_config(dir.path(), &format!("{BALL}[sweep]\nparams = [{params}]\n"));
        let o = run("verify", &cfg, &dir.path().join("out"), &[]);
        assert_eq!(code(&o), 2, "{params}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("inadmissible"));
        assert!(!dir.path().join("out").exists(), "nothing is written before validation");
    }
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let missing = dir.path().join("missing.cfg");
    assert_eq!(code(&run("solve", &missing, &out, &[])), 2);
    let cfg = write_config(dir.path(), "[shape]\nkind = \"sphere\"\nradius = 0.0\n");
    assert_eq!(code(&run("solve", &cfg, &out, &[])), 2);
    let cfg = write_config(dir.path(), BALL);
    assert_eq!(code(&run("solve", &cfg, &out, &["--refinement", "9"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_willmore"))
        .args(["solve", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .env("WILLMORE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), BALL);
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = run("solve", &cfg, &blocker.join("out"), &["--refinement", "1"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn solve_writes_the_solution() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), BALL);
    let out = dir.path().join("out");
    let o = run("solve", &cfg, &out, &["--refinement", "3", "--no-plots"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let capacity: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("capacity.json")).unwrap()).unwrap();
    assert!((capacity["capacity"].as_f64().unwrap() - 1.0).abs() < 0.01);
    let solution = std::fs::read_to_string(out.join("solution.json")).unwrap();
    let sol = willmore_core::potential::PotentialSolution::from_json(&solution).unwrap();
    assert_eq!(sol.mesh().triangle_count(), 1280);
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["steps"].as_array().unwrap().len(), 1);
}

#[test]
fn failed_checks_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), &format!("{BALL}[tolerances]\ncapacity = 1e-9\n"));
    let o = run("solve", &cfg, &dir.path().join("out"), &["--refinement", "2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL capacity"));
}

const SMALL_SPHEROID: &str = r#"
name = "small"
refinement = 3
checks = ["capacity", "inequalities", "monotonicity", "pointwise", "identity"]

[shape]
kind = "ellipsoid"
a = 2.0
b = 1.0
c = 1.0

[sweep]
params = [{ beta = 1.0, c = 1.0, d = 0.0 }, { beta = 2.0, c = -1.0, d = 1.0 }]

[tau]
first = 1.0
last = 20.0
count = 8

[identity]
nodes = 9

[pointwise]
points = 40
seed = 5
"#;

fn files_under(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

#[test]
fn verify_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), SMALL_SPHEROID);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let first = run("verify", &cfg, &a, &[]);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stdout));
    assert_eq!(code(&run("verify", &cfg, &b, &[])), 0);
    let files = files_under(&a);
    assert_eq!(files, files_under(&b));
    for name in [
        "summary.json",
        "capacity.json",
        "inequalities.csv",
        "inequalities.json",
        "monotonicity.json",
        "pointwise.csv",
        "identity.csv",
        "curves/beta1_c1_d0.csv",
        "plots/beta2_c-1_d1.svg",
    ] {
        assert!(files.contains(&PathBuf::from(name)), "{name} missing");
    }
    for f in &files {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{}", f.display());
    }
    let curve = std::fs::read_to_string(a.join("curves/beta1_c1_d0.csv")).unwrap();
    assert!(curve.starts_with("tau,H_cd,F_beta,F_beta_prime,residual,violation_flag\n"));
    assert_eq!(curve.lines().count(), 9);
}

#[test]
fn seed_changes_only_the_sample() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), SMALL_SPHEROID);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(code(&run("divcheck", &cfg, &a, &["--seed", "1"])), 0);
    assert_eq!(code(&run("divcheck", &cfg, &b, &["--seed", "2"])), 0);
    let read = |d: &Path| std::fs::read_to_string(d.join("pointwise.csv")).unwrap();
    assert_ne!(read(&a), read(&b));
    assert_eq!(
        std::fs::read_to_string(a.join("solution.json")).unwrap(),
        std::fs::read_to_string(b.join("solution.json")).unwrap()
    );
}

#[test]
fn subcommands_select_their_checks() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), SMALL_SPHEROID);
    for (sub, file) in [("monotonicity", "monotonicity.json"), ("identity", "identity.json")] {
        let out = dir.path().join(sub);
        let o = run(sub, &cfg, &out, &["--no-plots"]);
        assert_eq!(code(&o), 0, "{sub}: {}", String::from_utf8_lossy(&o.stdout));
        assert!(out.join(file).exists());
        assert!(!out.join("capacity.json").exists());
        assert!(!out.join("plots").exists());
    }
}

#[test]
fn converge_reports_decreasing_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), &format!("checks = [\"capacity\"]\n{BALL}[convergence]\nrefinements = [1, 2, 3]\n"));
    let out = dir.path().join("out");
    let o = run("converge", &cfg, &out, &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let csv = std::fs::read_to_string(out.join("convergence.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("refinement,panels,iterations,capacity,capacity_error"));
    assert!(rows[1].contains(",n/a,n/a,"), "no order or drift on the first row");
}

#[test]
fn oracle_dump_lists_reference_values() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), BALL);
    let out = dir.path().join("out");
    assert_eq!(code(&run("oracle-dump", &cfg, &out, &[])), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("oracles.json")).unwrap()).unwrap();
    assert_eq!(v["capacity"], 1.0);
    assert_eq!(v["ball_reference"].as_array().unwrap().len(), 12);
    let energies = v["willmore_energy"].as_array().unwrap();
    let at_two = energies.iter().find(|e| e["p"] == 2.0).unwrap();
    assert!((at_two["energy"].as_f64().unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-9);
}
