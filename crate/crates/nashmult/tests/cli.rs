//! End-to-end tests of the command-line binary: exit-code contract,
//! determinism, and table/JSON value agreement.

use std::process::{Command, Output};

fn scenario(name: &str) -> String {
    format!("{}/scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nashmult"))
        .args(args)
        .output()
        .expect("failed to spawn the binary")
}

#[test]
fn persist_cusp_reports_anchor_values() {
    let out = run(&["persist", &scenario("cusp.scn")]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let row = stdout.lines().find(|l| l.starts_with("G:phi ")).unwrap();
    assert!(row.contains("2 [formula]"), "nu_t missing in: {row}");
    assert!(row.contains("3 [formula]"), "r/rho missing in: {row}");
    assert!(row.contains("3/2 [formula]"), "r_bar missing in: {row}");
}

#[test]
fn output_is_deterministic() {
    let a = run(&["persist", &scenario("cusp.scn"), "--oracle"]);
    let b = run(&["persist", &scenario("cusp.scn"), "--oracle"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "byte-identical output expected");
}

#[test]
fn table_and_json_carry_the_same_values() {
    let table = run(&["persist", &scenario("cusp.scn")]);
    let json = run(&["persist", &scenario("cusp.scn"), "--output", "json"]);
    assert_eq!(table.status.code(), Some(0));
    assert_eq!(json.status.code(), Some(0));
    let json_text = String::from_utf8(json.stdout).unwrap();
    let first: serde_json::Value = serde_json::from_str(json_text.lines().next().unwrap()).unwrap();
    assert_eq!(first["command"], "persist");
    assert_eq!(first["fields"]["r"]["value"], serde_json::json!(3));
    assert_eq!(first["fields"]["r"]["provenance"], "formula");
    assert_eq!(first["fields"]["r_bar"]["value"], serde_json::json!("3/2"));
    let table_text = String::from_utf8(table.stdout).unwrap();
    assert!(table_text.contains("3/2 [formula]"));
}

#[test]
fn parse_error_exits_2() {
    let dir = std::env::temp_dir().join("nashmult-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.scn");
    std::fs::write(&bad, r#"{"char": 0, "variables": ["x"], "nonsense": 1}"#).unwrap();
    let out = run(&["order", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let missing = run(&["order", "/does/not/exist.scn"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn truncated_nash_exits_3() {
    let out = run(&["nash", &scenario("cusp.scn"), "--max-steps", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("≥2?"), "expected an inconclusive marker: {stdout}");
}

#[test]
fn nash_full_run_exits_0() {
    let out = run(&["nash", &scenario("cusp.scn")]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("dropped_at"));
    assert!(stdout.contains("3 [oracle]"));
}

#[test]
fn compare_verdicts_drive_exit_codes() {
    let equal = run(&["compare", &scenario("redundant.scn"), "--oracle"]);
    assert_eq!(equal.status.code(), Some(0));
    assert!(String::from_utf8(equal.stdout).unwrap().contains("all-equal"));

    let unequal = run(&["compare", &scenario("tower.scn")]);
    assert_eq!(unequal.status.code(), Some(1));
    assert!(String::from_utf8(unequal.stdout).unwrap().contains("mismatch"));
}

#[test]
fn degenerate_arc_exits_3() {
    let out = run(&["persist", &scenario("degenerate.scn")]);
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("undefined"));
}

#[test]
fn zariski_sweep_exits_0() {
    let out = run(&["zariski", &scenario("zariski5.scn")]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("true [brute-force]"));
}

#[test]
fn char_override_switches_field() {
    let out = run(&["sing", &scenario("cusp.scn"), "--char", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("brute-force"), "expected F_5 enumeration: {stdout}");
    assert!(stdout.contains("(0,0)"));
}

#[test]
fn selftest_exits_0() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(!stdout.contains("false"), "a selftest case disagreed: {stdout}");
}

#[test]
fn precision_override_forces_inconclusive() {
    // at precision 4 the order of the cusp arc is no longer witnessed
    let out = run(&["persist", &scenario("cusp.scn"), "--precision", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
