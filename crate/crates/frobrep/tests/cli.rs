//! End-to-end tests of the binary: exit codes, JSON round trips, and
//! deterministic seeded output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frobrep"))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout must be valid JSON")
}

const B2_CARTAN: &str = r#"{
  "schema": "frobrep/cartan/1",
  "matrix": [[2, -1], [-2, 2]],
  "symmetrizer": [2, 1]
}"#;

const B2_ALGEBRA: &str = r#"{
  "schema": "frobrep/algebra/1",
  "field": "rational",
  "cartan": { "matrix": [[2, -1], [-2, 2]], "symmetrizer": [2, 1] }
}"#;

const AFFINE_ALGEBRA: &str = r#"{
  "schema": "frobrep/algebra/1",
  "field": "rational",
  "quiver": { "vertices": 2, "arrows": [[1, 2], [1, 2]], "truncation": 1 }
}"#;

const E1_MODULE: &str = r#"{
  "schema": "frobrep/module/1",
  "field": "rational",
  "vertices": [[], [["0"]]],
  "maps": [{ "target": 1, "source": 2, "entries": [] }]
}"#;

#[test]
fn classify_reports_the_type_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cartan = write_file(dir.path(), "c.json", B2_CARTAN);
    let out = bin().args(["classify", "--cartan"]).arg(&cartan).output().unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["type"], "Dynkin");
    assert_eq!(report["schema"], "frobrep/report/1");
    // Emit -> parse -> emit is a fixed point.
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let reparsed: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&reparsed).unwrap(), text.trim_end());
}

#[test]
fn classify_rejects_malformed_input_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write_file(dir.path(), "bad.json", "{\"oops\": 1}");
    let out = bin().args(["classify", "--cartan"]).arg(&garbage).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    let out = bin().args(["classify", "--cartan"]).arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn roots_agree_with_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cartan = write_file(dir.path(), "c.json", B2_CARTAN);
    let out = bin().args(["roots", "--cartan"]).arg(&cartan).output().unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["count"], 4);
    assert_eq!(report["agree"], true);
}

#[test]
fn enumerate_refuses_non_finite_type_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let algebra = write_file(dir.path(), "a.json", AFFINE_ALGEBRA);
    let out = bin().args(["enumerate", "--algebra"]).arg(&algebra).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("not Dynkin"), "stderr was: {stderr}");
}

#[test]
fn enumerate_lists_every_root() {
    let dir = tempfile::tempdir().unwrap();
    let algebra = write_file(dir.path(), "a.json", B2_ALGEBRA);
    let out = bin().args(["enumerate", "--algebra"]).arg(&algebra).output().unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["count"], 4);
    assert_eq!(report["table"].as_array().unwrap().len(), 4);
    for row in report["table"].as_array().unwrap() {
        assert_eq!(row["certified_indecomposable"], true);
    }
}

#[test]
fn translation_round_trips_through_module_files() {
    let dir = tempfile::tempdir().unwrap();
    let algebra = write_file(dir.path(), "a.json", B2_ALGEBRA);
    let module = write_file(dir.path(), "m.json", E1_MODULE);
    let out = bin()
        .args(["rep", "tau", "--algebra"])
        .arg(&algebra)
        .args(["--module"])
        .arg(&module)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["output_dims"], serde_json::json!([2, 1]));
    let translated = write_file(
        dir.path(),
        "t.json",
        &serde_json::to_string(&report["module"]).unwrap(),
    );
    let back = bin()
        .args(["rep", "tau", "--inverse", "--algebra"])
        .arg(&algebra)
        .args(["--module"])
        .arg(&translated)
        .output()
        .unwrap();
    assert!(back.status.success());
    let report = stdout_json(&back);
    assert_eq!(report["output_dims"], serde_json::json!([0, 1]));
}

#[test]
fn translation_refuses_non_locally_free_modules_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let algebra = write_file(dir.path(), "a.json", B2_ALGEBRA);
    let socle = write_file(
        dir.path(),
        "s.json",
        r#"{
  "schema": "frobrep/module/1",
  "field": "rational",
  "vertices": [[["0"]], []],
  "maps": [{ "target": 1, "source": 2, "entries": [[]] }]
}"#,
    );
    let out = bin()
        .args(["rep", "tau", "--algebra"])
        .arg(&algebra)
        .args(["--module"])
        .arg(&socle)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("locally free"));
}

#[test]
fn verification_subcommands_pass_on_a_small_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let algebra = write_file(dir.path(), "a.json", B2_ALGEBRA);
    for args in [
        vec!["verify", "bijection"],
        vec!["verify", "adjunction", "--count", "5"],
        vec!["verify", "ar-formula"],
        vec!["verify", "gorenstein"],
        vec!["verify", "gp", "--count", "10"],
        vec!["verify", "tilting", "--count", "2"],
        vec!["tilt-check"],
    ] {
        let out = bin().args(&args).args(["--algebra"]).arg(&algebra).output().unwrap();
        assert!(
            out.status.success(),
            "{args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report = stdout_json(&out);
        assert_eq!(report["pass"], true, "{args:?} reported failure");
    }
}

#[test]
fn seeded_runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let algebra = write_file(dir.path(), "a.json", B2_ALGEBRA);
    let run = || {
        bin()
            .args(["verify", "gp", "--count", "12", "--algebra"])
            .arg(&algebra)
            .env("FROBREP_SEED", "20260815")
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tsv_output_is_line_oriented() {
    let dir = tempfile::tempdir().unwrap();
    let cartan = write_file(dir.path(), "c.json", B2_CARTAN);
    let out = bin()
        .args(["classify", "--format", "tsv", "--cartan"])
        .arg(&cartan)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "type\tDynkin"));
}
