//! End-to-end tests of the `mvtto` binary: exit codes, report formats,
//! scenario files, sweeps and the demo.

use std::path::PathBuf;
use std::process::{Command, Output};

fn mvtto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvtto"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("mvtto-cli-{}-{name}", std::process::id()));
    p
}

const FAST_SCENARIO: &str = "\
seed = 3
dim = 2
strategy = simultaneously-diagonal
degrees = 2, 1
checks = decomp.projection_sum, inner, scalar.basis
";

#[test]
fn verify_fast_subset_passes_with_exit_zero() {
    let path = tmp("fast.cfg");
    std::fs::write(&path, FAST_SCENARIO).unwrap();
    let out = mvtto(&["verify", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("decomp.projection_sum"));
    assert!(text.contains("summary:"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_json_report_has_the_fixed_schema() {
    let path = tmp("json.cfg");
    std::fs::write(&path, FAST_SCENARIO).unwrap();
    let out = mvtto(&[
        "verify",
        "--scenario",
        path.to_str().unwrap(),
        "--report",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = value["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["check", "anchor", "defect", "tol", "pass", "window", "runtime_ms"] {
            assert!(c.get(key).is_some(), "missing key {key}");
        }
    }
    assert_eq!(value["summary"]["fail"], 0);
    assert_eq!(value["summary"]["seed"], 3);
}

#[test]
fn verify_reports_are_deterministic_modulo_runtime() {
    let path = tmp("det.cfg");
    std::fs::write(&path, FAST_SCENARIO).unwrap();
    let strip = |bytes: &[u8]| {
        let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("runtime_ms");
        }
        serde_json::to_string(&v).unwrap()
    };
    let a = mvtto(&["verify", "--scenario", path.to_str().unwrap(), "--report", "json"]);
    let b = mvtto(&["verify", "--scenario", path.to_str().unwrap(), "--report", "json"]);
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
}

#[test]
fn unknown_scenario_key_exits_2() {
    let path = tmp("badkey.cfg");
    std::fs::write(&path, "seeed = 1\n").unwrap();
    let out = mvtto(&["verify", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seeed"));
}

#[test]
fn zero_tolerance_exits_1() {
    let path = tmp("zerotol.cfg");
    std::fs::write(&path, FAST_SCENARIO).unwrap();
    let out = mvtto(&[
        "verify",
        "--scenario",
        path.to_str().unwrap(),
        "--tol",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn flags_override_scenario_file() {
    let path = tmp("override.cfg");
    std::fs::write(&path, FAST_SCENARIO).unwrap();
    let out = mvtto(&[
        "verify",
        "--scenario",
        path.to_str().unwrap(),
        "--seed",
        "11",
        "--report",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["summary"]["seed"], 11);
}

#[test]
fn verify_out_writes_the_report_file() {
    let scenario = tmp("outfile.cfg");
    std::fs::write(&scenario, FAST_SCENARIO).unwrap();
    let report = tmp("report.txt");
    let out = mvtto(&[
        "verify",
        "--scenario",
        scenario.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let contents = std::fs::read_to_string(&report).unwrap();
    assert!(contents.contains("summary:"));
}

#[test]
fn sweep_writes_one_csv_row_per_grid_point() {
    let scenario = tmp("sweep.cfg");
    std::fs::write(
        &scenario,
        "seed = 2\ndim = 2\nchecks = decomp.projection_sum, eq412.symmetric_commuting\n",
    )
    .unwrap();
    let csv_path = tmp("sweep.csv");
    let out = mvtto(&[
        "sweep",
        "--scenario",
        scenario.to_str().unwrap(),
        "--param",
        "symbol-scale",
        "--grid",
        "0.5,1,2,4,8",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(
        lines[0],
        "param,decomp.projection_sum,eq412.symmetric_commuting"
    );
    assert!(lines[1].starts_with("0.5,"));
    // '.' decimals, no locale
    assert!(!csv.contains(';'));
}

#[test]
fn sweep_unknown_param_exits_2() {
    let scenario = tmp("sweep-bad.cfg");
    std::fs::write(&scenario, "seed = 2\n").unwrap();
    let out = mvtto(&[
        "sweep",
        "--scenario",
        scenario.to_str().unwrap(),
        "--param",
        "nope",
        "--grid",
        "1,2",
        "--out",
        "/dev/null",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_prints_the_scalar_walkthrough() {
    let out = mvtto(&["demo", "--scalar-degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("theta = z^3"));
    assert!(text.contains("compressed shift"));
    assert!(text.contains("eq412"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = mvtto(&[]);
    assert_eq!(out.status.code(), Some(2));
}
