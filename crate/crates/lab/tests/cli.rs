//! End-to-end tests of the `advect-bc-lab` binary: exit codes, output
//! files and CSV determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_advect-bc-lab"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_config(tmp: &Path, name: &str, body: &str) -> String {
    let path = tmp.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = r#"
[scheme]
name = "lax_wendroff"

[problem]
geometry = "interval"
L = 1.0
lambda = 0.8333333333333334
a = 1.0
T = 0.5
f = "sin"
g = "neg_sin"

[boundary]
k_b = 2

[refinement]
J = [40, 80]
"#;

#[test]
fn presets_subcommand_lists_builtins() {
    let out = bin().arg("presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["table1", "table2", "table3", "halfline-outflow", "halfline-inflow"] {
        assert!(text.contains(name), "missing preset {name}");
    }
}

#[test]
fn missing_config_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["converge"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--config"));
}

#[test]
fn bad_oracle_name_exits_one_with_field() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "bad.toml", &SMALL.replace("\"sin\"", "\"sinn\""));
    let out = run_in(tmp.path(), &["converge", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("problem.f"));
}

#[test]
fn run_requires_a_single_refinement_entry() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "multi.toml", SMALL);
    let out = run_in(tmp.path(), &["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exactly one"));
}

#[test]
fn run_writes_per_step_errors_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(
        tmp.path(),
        "single.toml",
        &SMALL.replace("J = [40, 80]", "J = [40]"),
    );
    let out = run_in(tmp.path(), &["run", "--config", &cfg, "--out", "results"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("J=40"));
    assert!(stdout.contains("linf_nj="));
    let steps = fs::read_to_string(tmp.path().join("results/single_steps.csv")).unwrap();
    assert!(steps.starts_with("n,t,linf,l2\n"));
    // header plus levels 0..=N
    assert!(steps.lines().count() > 10);
    assert!(tmp.path().join("results/single.meta.toml").exists());
}

#[test]
fn converge_writes_table_plot_and_meta() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "study.toml", SMALL);
    let out = run_in(tmp.path(), &["converge", "--config", &cfg, "--out", "o", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("o/study.csv")).unwrap();
    assert!(csv.starts_with("J,dx,linf_nj,sup_l2,order_linf,order_l2,wall_ms\n"));
    assert_eq!(csv.lines().count(), 3);
    let dat = fs::read_to_string(tmp.path().join("o/study.dat")).unwrap();
    assert!(dat.starts_with("# dx linf_nj sup_l2\n"));
    let meta = fs::read_to_string(tmp.path().join("o/study.meta.toml")).unwrap();
    assert!(meta.contains("[scheme]"));
    assert!(meta.contains("[timing]"));
    // console table shows two-significant-digit errors and orders
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("linf_nj"));
}

/// Identical config and build give byte-identical CSV except for the
/// wall-clock column.
#[test]
fn converge_csv_is_deterministic_modulo_wall_ms() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "det.toml", SMALL);
    let strip_wall = |text: &str| -> String {
        text.lines()
            .map(|line| {
                let mut fields: Vec<&str> = line.split(',').collect();
                fields.pop();
                fields.join(",")
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    run_in(tmp.path(), &["converge", "--config", &cfg, "--out", "a", "--jobs", "2"]);
    run_in(tmp.path(), &["converge", "--config", &cfg, "--out", "b", "--jobs", "1"]);
    let a = fs::read_to_string(tmp.path().join("a/det.csv")).unwrap();
    let b = fs::read_to_string(tmp.path().join("b/det.csv")).unwrap();
    assert_eq!(strip_wall(&a), strip_wall(&b));
    // plot data carries no timing at all: bytes must match
    let da = fs::read_to_string(tmp.path().join("a/det.dat")).unwrap();
    let db = fs::read_to_string(tmp.path().join("b/det.dat")).unwrap();
    assert_eq!(da, db);
}

#[test]
fn instability_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(
        tmp.path(),
        "unstable.toml",
        &SMALL
            .replace("lambda = 0.8333333333333334", "lambda = 1.1")
            .replace("T = 0.5", "T = 8.0")
            .replace("J = [40, 80]", "J = [200]"),
    );
    let out = run_in(tmp.path(), &["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blew up"));
    // converge over unstable rows also exits 2 after recording them
    let cfg = small_config(
        tmp.path(),
        "unstable2.toml",
        &SMALL
            .replace("lambda = 0.8333333333333334", "lambda = 1.1")
            .replace("T = 0.5", "T = 8.0")
            .replace("J = [40, 80]", "J = [200, 400]"),
    );
    let out = run_in(tmp.path(), &["converge", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_writes_json_and_strict_gates_violations() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "good.toml", SMALL);
    let out = run_in(tmp.path(), &["analyze", "--config", &cfg, "--strict", "--out", "a"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json = fs::read_to_string(tmp.path().join("a/good_analysis.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["scheme"]["name"], "lax_wendroff");
    assert_eq!(parsed["root_assumption_satisfied"], true);

    // cfl above one violates the amplification bound
    let cfg = small_config(
        tmp.path(),
        "viol.toml",
        &SMALL.replace("lambda = 0.8333333333333334", "lambda = 1.1"),
    );
    let strict = run_in(tmp.path(), &["analyze", "--config", &cfg, "--strict"]);
    assert_eq!(strict.status.code(), Some(3));
    let lax = run_in(tmp.path(), &["analyze", "--config", &cfg]);
    assert_eq!(lax.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&lax.stdout).contains("violation"));
}

#[test]
fn preset_analyze_runs_clean() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["analyze", "--preset", "table3", "--strict"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("scheme o3"));
    assert!(stdout.contains("all assumptions satisfied"));
}

#[test]
fn config_and_preset_together_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "c.toml", SMALL);
    let out = run_in(tmp.path(), &["converge", "--config", &cfg, "--preset", "table1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not both"));
}
