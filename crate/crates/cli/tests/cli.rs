use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heisenlab"))
}

fn run_in(out: &Path, args: &[&str]) -> Output {
    bin().arg("--out").arg(out).args(args).output().expect("binary runs")
}

fn schema(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn list_json_validates_against_catalog_schema() {
    let out = bin().args(["list", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let validator = jsonschema::validator_for(&schema("catalog.schema.json")).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
    let entries = v.as_array().unwrap();
    assert!(entries.len() >= 12);
    assert!(entries.iter().all(|e| !e["anchor"].as_str().unwrap().trim().is_empty()));
}

#[test]
fn unknown_key_exits_2_with_suggestion() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["run", "weyl-homomorphism", "--set", "lamda=1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown key `lamda`") && err.contains("did you mean `lambda`"), "{err}");
}

#[test]
fn unknown_experiment_suggests_a_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["run", "hermite-orthonormalty"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hermite-orthonormality"));
}

#[test]
fn non_positive_tolerance_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["run", "neumann-identity", "--set", "tol_sup=0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_in(dir.path(), &["--tol-scale", "-1", "run", "neumann-identity"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_is_validated_and_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let text = r#"{"experiment": "hermite-orthonormality", "trunc_k": 16, "lambdas": [1.0]}"#;
    std::fs::write(&cfg, text).unwrap();
    let validator = jsonschema::validator_for(&schema("config.schema.json")).unwrap();
    assert!(validator.is_valid(&serde_json::from_str(text).unwrap()));
    let out = bin().arg("--out").arg(dir.path()).arg("--config").arg(&cfg).arg("run").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("hermite-orthonormality.json")).unwrap()).unwrap();
    assert_eq!(rep["params"]["trunc_k"], 16);
    assert_eq!(rep["pass"], true);
}

#[test]
fn failing_report_exits_1_and_passing_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["run", "neumann-identity"]).status.code(), Some(0));
    // a tolerance below the attainable accuracy fails honestly
    let out = run_in(dir.path(), &["run", "neumann-identity", "--set", "terms=5"]);
    assert_eq!(out.status.code(), Some(1));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("neumann-identity.json")).unwrap()).unwrap();
    assert_eq!(rep["pass"], false);
}

#[test]
fn homogeneity_negative_control_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["homogeneity", "--operator", "A_H_inv_sqrt"]);
    assert_eq!(out.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.path().join("homogeneity.coefficients.csv")).unwrap();
    assert!(csv.starts_with("a,b,j,k,coeff_re,coeff_im"));
}

#[test]
fn kernels_csv_has_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["kernels", "--kind", "bessel", "--s", "0.5", "--radii", "0.5,1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,lambda,params,|z|,value,rel_err_est"));
    assert_eq!(lines.count(), 2);
    // d + n ≤ 0 is outside the integrability range
    let out = run_in(dir.path(), &["kernels", "--kind", "bessel", "--d", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timestamps_live_in_the_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["run", "neumann-identity"]);
    let rep = std::fs::read_to_string(dir.path().join("neumann-identity.json")).unwrap();
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("neumann-identity.meta.json")).unwrap()).unwrap();
    assert!(!rep.contains("finished_unix"));
    assert!(meta["finished_unix"].as_u64().unwrap() > 0);
}
