use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mingap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mingap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn mingap_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mingap"))
        .env("MINGAP_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_writes_graph_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d42.json");
    let o = mingap(&["construct", "--family", "delta", "--n", "42", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["n"], 42);
    assert_eq!(v["edges"].as_array().unwrap().len(), 63);
}

#[test]
fn construct_assembly() {
    let o = mingap(&["construct", "--left", "D3", "--q", "2", "--right", "D1m"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let n = v["n"].as_u64().unwrap() as usize;
    assert_eq!(v["edges"].as_array().unwrap().len(), 2 * n);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mingap(&["construct", "--family", "delta", "--n", "12"]).status.code(), Some(2));
    assert_eq!(mingap(&["gaps", "--family", "gamma", "--range", "12:15:1"]).status.code(), Some(2));
    assert_eq!(mingap(&["nonsense"]).status.code(), Some(2));
    assert_eq!(mingap(&["plot", "eigenvector", "--family", "delta"]).status.code(), Some(2));
    assert_eq!(mingap(&["--help"]).status.code(), Some(0));
}

#[test]
fn range_warns_on_skipped_orders() {
    let o = mingap(&["gaps", "--family", "delta", "--range", "10:22:2"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.matches("warning: skipping").count(), 3);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(1) == Some("true")));
}

#[test]
fn spectrum_uses_fifteen_digits() {
    let o = mingap(&["spectrum", "--family", "delta", "--n", "10"]);
    let csv = String::from_utf8(o.stdout).unwrap();
    let first = csv.lines().nth(1).unwrap();
    assert_eq!(first, "1,3.00000000000000,1");
    let last = csv.lines().last().unwrap();
    let rho: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!(rho < -2.4 && rho > -2.5);
}

#[test]
fn converge_table_header() {
    let o = mingap(&["converge", "--family", "delta", "--range", "14:30:4"]);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert!(csv.starts_with("n,rho,err,gap_ratio"));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn audit_reports_records() {
    let o = mingap(&["audit", "--family", "delta", "--range", "18:26:4", "--check", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 12);
    for r in &lines {
        for key in ["check", "family", "n", "pass", "details"] {
            assert!(r.get(key).is_some(), "{key} missing");
        }
    }
}

#[test]
fn residual_sweep_for_sqrt5() {
    let o = mingap(&["residual", "--family", "cubic", "--lambda", "2.23606797749979", "--m", "2:10"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    for row in csv.lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        let m: f64 = f[1].parse().unwrap();
        let r: f64 = f[2].parse().unwrap();
        assert!(r >= 2.0 / (4.0 * m + 5f64.sqrt() + 1.0), "{row}");
    }
}

#[test]
fn eigenvector_plot_is_end_heavy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.svg");
    let o = mingap(&["plot", "eigenvector", "--family", "delta", "--n", "210", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
}

#[test]
fn band_plot_has_flat_branch() {
    let o = mingap(&["plot", "band", "--family", "delta"]);
    let svg = String::from_utf8(o.stdout).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert!(svg.contains(r#"class="band""#));
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    for args in [
        &["plot", "scatter", "--family", "gamma", "--range", "11:61:5"][..],
        &["converge", "--family", "delta", "--range", "14:62:4"][..],
        &["bands", "--family", "gamma", "--samples", "256"][..],
    ] {
        let a = mingap_threads("1", args);
        let b = mingap_threads("4", args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_all_names_every_criterion() {
    let o = mingap(&["verify-all", "--max-cubic-n", "42", "--max-quartic-n", "31"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 14);
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, mingap_core::verify::CHECK_NAMES);
    let pass = v["pass"].as_bool().unwrap();
    assert_eq!(o.status.code(), Some(if pass { 0 } else { 1 }));
}
