use std::process::{Command, Output};

fn doublebos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doublebos")).args(args).output().expect("binary runs")
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("golden file")
}

#[test]
fn induct_sl3_matches_golden() {
    let out = doublebos(&["induct-sl3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("induct-sl3.json"));
}

#[test]
fn build_a1_matches_golden() {
    let out = doublebos(&["build", "--datum", "A1", "--verify", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("build-A1-verify3.json"));
}

#[test]
fn serre_a2() {
    let out = doublebos(&["serre", "--datum", "A2", "--degree", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rels = v["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 1);
    assert!(rels[0]["lhs"].as_str().unwrap().contains("(-q - q^{-1}) e^1e^2e^1"));
}

#[test]
fn root_of_unity_three() {
    let out = doublebos(&["root-of-unity", "--r", "3", "--verify-qt"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("quasitriangular axioms: pass (3/3)"));
}

#[test]
fn invalid_datum_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"n":2,"dot":[[2,-1],[-2,2]]}"#).unwrap();
    let out = doublebos(&["cartan-check", "--datum", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"status\": \"fail\""));
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(doublebos(&["build", "--datum", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(doublebos(&["build", "--datum", "A1", "--cyclotomic", "4"]).status.code(), Some(2));
    assert_eq!(doublebos(&["rmatrix-relations", "--file", "sl2-rmatrix", "--lambda", "q^("]).status.code(), Some(2));
}

#[test]
fn rmatrix_relations_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("rel");
    let out = doublebos(&["rmatrix-relations", "--file", "sl2-rmatrix", "--dilaton", "--lambda", "q^{-3/2}", "--format", "both", "--out", base.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let tex = std::fs::read_to_string(base.with_extension("tex")).unwrap();
    assert!(tex.contains("\\Delta (e^1)"));
    let js = std::fs::read_to_string(base.with_extension("json")).unwrap();
    assert!(js.contains("c^{-1}"));
}

#[test]
fn fundamental_a1() {
    let out = doublebos(&["fundamental", "--datum", "A1", "--max-degree", "4", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
