use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn dgforge(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dgforge"));
    cmd.current_dir(corpus()).args(args).env_remove("DGFORGE_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("DGFORGE_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn golden_weight_truncation() {
    let o = dgforge(&["wtrunc", "--level", "0", "lambda_mixed.json"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("wtrunc_lambda_mixed.json"));
}

#[test]
fn golden_validate_reports_the_nonexample() {
    let o = dgforge(&["validate", "dual.json"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("validate_dual.json"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tables"]["class_p"], Value::Bool(false));
}

#[test]
fn golden_jordan_holder_text() {
    let o = dgforge(&["--format", "text", "jh", "lambda_mx.json"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("jh_lambda_mx.txt"));
}

#[test]
fn missing_file_exits_1() {
    let o = dgforge(&["homology", "no_such_file.json"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_kind(&o), "io");
    assert!(o.stdout.is_empty());
}

#[test]
fn schema_error_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown_key.json", r#"{"field": "Q", "idempotents": ["e"], "basis": [], "mult": [], "diff": [], "extra": 1}"#),
        ("no_kind.json", r#"{"field": "Q"}"#),
        ("not_json.json", "{"),
        ("fractional_degree.json", r#"{"algebra": "lambda", "basis": [{"name": "a", "deg": 0.5, "idem": "e"}], "diff": [], "action": []}"#),
    ];
    for (name, text) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let o = dgforge(&["validate", path.to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert_eq!(error_kind(&o), "schema", "{name}");
    }
}

#[test]
fn class_p_operations_reject_the_nonexample() {
    for args in [
        &["wtrunc", "--level", "0", "dual_cone_eps.json"][..],
        &["wfilt", "dual_cone_eps.json"],
        &["ttrunc", "--level", "0", "dual_cone_eps.json"],
        &["heart", "dual_cone_eps.json"],
        &["jh", "dual_cone_eps.json"],
        &["tower", "dual_cone_eps.json"],
        &["resolve", "dual_cone_eps.json"],
        &["smo-check", "dual.json"],
    ] {
        let o = dgforge(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(error_kind(&o), "class_p_required", "{args:?}");
    }
}

#[test]
fn usage_errors_exit_1() {
    let o = dgforge(&["dhom", "--from", "lambda_simple.json", "--to", "lambda_simple.json", "--range", "3:1"], None);
    assert_eq!(o.status.code(), Some(1));
    for args in [&["wtrunc", "lambda_mixed.json"][..], &["frobnicate"], &["--format", "yaml", "homology", "k2_module.json"]] {
        assert_eq!(dgforge(args, None).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(dgforge(&["--help"], None).status.code(), Some(0));
}

#[test]
fn invalid_module_is_reported_not_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad_diff.json");
    let doc = r#"{"algebra": "lambda",
        "basis": [{"name": "a", "deg": 0, "idem": "e"}, {"name": "b", "deg": 1, "idem": "e"}, {"name": "c", "deg": 2, "idem": "e"}],
        "diff": [["b", [{"c": "c", "coef": 1}]]], "action": [["a", "x", [{"c": "b", "coef": 1}]]]}"#;
    std::fs::write(&path, doc).unwrap();
    let o = dgforge(&["validate", path.to_str().unwrap()], None);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(v["certificates"]["valid"], Value::Bool(false));
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["ttrunc", "--level", "0", "quiver_extension.json"];
    let cold = dgforge(&args, None);
    let first = dgforge(&args, Some(dir.path()));
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 1);
    let second = dgforge(&args, Some(dir.path()));
    assert_eq!(stdout(&cold), stdout(&first));
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let other = dgforge(&["ttrunc", "--level", "1", "quiver_extension.json"], Some(dir.path()));
    assert!(other.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    let bypass = dgforge(&["--no-cache", "ttrunc", "--level", "2", "quiver_extension.json"], Some(dir.path()));
    assert!(bypass.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["homology", "k2_module.json"];
    let first = dgforge(&args, Some(dir.path()));
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), "not json").unwrap();
    }
    let second = dgforge(&args, Some(dir.path()));
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn corpus_command_writes_the_shipped_documents() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let o = dgforge(&["corpus", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success());
    for (file, doc) in dgforge::shipped::documents() {
        let written = std::fs::read_to_string(out.join(&file)).unwrap();
        assert_eq!(written, doc.to_canonical(), "{file}");
        assert_eq!(written, std::fs::read_to_string(corpus().join(&file)).unwrap(), "{file}");
    }
}

#[test]
fn homology_over_a_prime_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f3.json");
    let doc = r#"{"algebra": "k1@F3", "basis": [{"name": "a", "deg": 0, "idem": "e1"}, {"name": "b", "deg": 1, "idem": "e1"}],
        "diff": [["a", [{"c": "b", "coef": 3}]]], "action": []}"#;
    std::fs::write(&path, doc).unwrap();
    let o = dgforge(&["homology", path.to_str().unwrap()], None);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["tables"]["homology"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2, "3 = 0 in F_3, so the differential vanishes");
}

#[test]
fn dhom_marks_unverified_rows() {
    let o = dgforge(
        &["dhom", "--from", "lambda_simple.json", "--to", "lambda_simple.json", "--range", "-3:2", "--budget", "6"],
        None,
    );
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["certificates"].as_object().unwrap().is_empty());
    assert_eq!(v["verified_ranges"], serde_json::json!([[-3, -1], [1, 2]]));
}
