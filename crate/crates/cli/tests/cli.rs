//! End-to-end checks of the binary: output content and exit codes.

use std::process::Command;

fn gridkh(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gridkh"))
        .args(args)
        .output()
        .expect("binary runs")
}

const TREFOIL: &str = "n=5; X=3,4,5,1,2; O=1,2,3,4,5";

#[test]
fn info_reports_diagram_data() {
    let out = gridkh(&["--grid", TREFOIL, "info"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("writhe = -3"));
    assert!(text.contains("components = 1"));
}

#[test]
fn info_json_round_trips() {
    let out = gridkh(&["--grid", TREFOIL, "--format", "json", "info"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["writhe"], serde_json::json!(-3));
    assert_eq!(v["crossings"].as_array().unwrap().len(), 3);
}

#[test]
fn jones_routes_agree() {
    let out = gridkh(&["--grid", TREFOIL, "--format", "json", "jones"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bigelow"], v["state_sum_adjusted"]);
    // Single-route output.
    let out = gridkh(&["--grid", TREFOIL, "jones", "--route", "statesum"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), "-q^-9 + q^-5 + q^-3 + q^-1");
}

#[test]
fn khovanov_table_of_the_trefoil() {
    let out = gridkh(&["--grid", TREFOIL, "khovanov"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(-3, -9): Z"));
    assert!(text.contains("(-2, -7): Z/2"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn reduce_respects_ring_and_homotopy_flags() {
    let out = gridkh(&[
        "--grid", TREFOIL, "--ring", "q", "--homotopy", "average", "--format", "json", "reduce",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["basis"].as_array().unwrap().len(), 16);
    // Rational homology has no torsion rows.
    for row in v["homology"].as_array().unwrap() {
        assert!(row["torsion"].as_array().unwrap().is_empty());
    }
    // Averaging over Z is a usage error -> verification failure code.
    let out = gridkh(&["--grid", TREFOIL, "--homotopy", "average", "reduce"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_on_good_input() {
    let out = gridkh(&["--grid", "n=2; X=2,1; O=1,2", "verify"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[ok]"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn file_input_and_json_grid() {
    let dir = std::env::temp_dir().join("gridkh-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hopf.json");
    std::fs::write(&path, r#"{"size":4,"x":[4,3,2,1],"o":[2,1,4,3]}"#).unwrap();
    let out = gridkh(&["--file", path.to_str().unwrap(), "info"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("components = 2"));
}

#[test]
fn exit_codes() {
    // Invalid input: 1.
    let out = gridkh(&["--grid", "n=2; X=1,2; O=1,2", "info"]);
    assert_eq!(out.status.code(), Some(1));
    let out = gridkh(&["--grid", "nonsense", "info"]);
    assert_eq!(out.status.code(), Some(1));
    // Resource cap: 3.
    let out = gridkh(&["--grid", TREFOIL, "verify", "--cap", "4"]);
    assert_eq!(out.status.code(), Some(3));
}
