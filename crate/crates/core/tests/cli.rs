use std::process::Command;

use dseries::cli::run;
use dseries::dirichlet::{assemble_phi, builtin_fields, read_csv, read_json};
use num_bigint::BigInt;

fn run_args(args: &[&str]) -> (i32, String, String) {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("dseries").chain(args.iter().copied()), &mut o, &mut e);
    (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

fn field_file(dir: &tempfile::TempDir) -> String {
    let p = dir.path().join("ex.txt");
    std::fs::write(&p, "# D = 13\n5 13 2 -3 5 0 5 0\n").unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn phi_intro_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = field_file(&dir);
    let (code, out, err) = run_args(&["phi", "--ell", "5", "--D", "13", "--X", "1100", "--fields", &f]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "59,1\n409,1\n475,1\n619,1\n709,1\n1009,1\n");
    assert!(err.contains("sum_b A_b"));
}

#[test]
fn phi_special_and_trivial_class_group() {
    let (code, out, _) = run_args(&["phi", "--ell", "5", "--D", "5", "--X", "100"]);
    assert_eq!(code, 0);
    assert_eq!(out, "55,1\n");
    let (code, out, err) = run_args(&["phi", "--ell", "5", "--D", "-4", "--X", "100"]);
    assert_eq!(code, 0);
    assert_eq!(out, "19,1\n25,1\n41,1\n59,1\n61,1\n79,1\n");
    assert!(err.contains("case: special") || err.contains("case: general"));
}

#[test]
fn phi_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = field_file(&dir);
    let want = assemble_phi(13, 5, &builtin_fields(13, 5).unwrap(), 30_000)
        .unwrap()
        .to_integer_series()
        .unwrap();
    let js = dir.path().join("s.json");
    let cs = dir.path().join("s.csv");
    for (fmt, path) in [("json", &js), ("csv", &cs)] {
        let (code, _, err) = run_args(&[
            "phi",
            "--ell",
            "5",
            "--D",
            "13",
            "--X",
            "30000",
            "--fields",
            &f,
            "--format",
            fmt,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
    }
    assert_eq!(read_json(&std::fs::read_to_string(&js).unwrap()).unwrap(), want);
    assert_eq!(read_csv(&std::fs::read_to_string(&cs).unwrap()).unwrap(), want.terms);
    assert_eq!(want.get(24_131), BigInt::from(4));
}

#[test]
fn phi_cubic_routes() {
    let (code, out, _) = run_args(&["phi", "--ell", "3", "--D", "-107", "--X", "10"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1,1\n"));
    // Other cubic resolvents come from the field table: N3(-23) = 1.
    let (code, out, _) = run_args(&["phi", "--ell", "3", "--D", "-23", "--X", "5"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1,1\n"), "{out}");
}

#[test]
fn duplicate_fields_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dup.txt");
    std::fs::write(&p, "5 13 2 -3 5 0 5 0\n5 13 2 -3 5 0 5 0\n").unwrap();
    let (code, _, err) = run_args(&["phi", "--ell", "5", "--D", "13", "--X", "100", "--fields", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("duplicate"));
}

#[test]
fn non_fundamental_input() {
    assert_eq!(run_args(&["phi", "--ell", "5", "--D", "12", "--X", "100"]).0, 2);
    assert_eq!(run_args(&["phi", "--ell", "9", "--D", "13", "--X", "100"]).0, 2);
}

#[test]
fn count_examples() {
    let (code, out, _) = run_args(&["count", "--ell", "5", "--D", "13", "--X", "1009"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("M = 6\n"), "{out}");
    let (code, out, _) = run_args(&["count", "--ell", "5", "--D", "13", "--X", "0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("M = 0\n"));
    let (_, out, _) = run_args(&["count", "--ell", "3", "--D", "-3", "--X", "1000"]);
    assert!(out.contains("C*X*log(X)"));
}

#[test]
fn constant_example() {
    let (code, out, _) = run_args(&["constant", "--ell", "3", "--D", "-3", "--digits", "4"]);
    assert_eq!(code, 0);
    assert!(out.trim().starts_with("0.0669"), "{out}");
    let (_, out, _) = run_args(&["constant", "--ell", "3", "--D", "-4", "--digits", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.136219).abs() < 1e-4);
}

#[test]
fn verify_sweeps_pass() {
    for args in [
        &["verify", "on", "--maxD", "2000"][..],
        &["verify", "sample_s3", "--maxN", "30"],
        &["verify", "aac", "--maxL", "10000"],
        &["verify", "examples"],
        &["verify", "unit-split", "--maxN", "20000"],
    ] {
        let (code, out, err) = run_args(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(!out.contains("FAIL"));
        let last = out.lines().last().unwrap();
        let v: serde_json::Value = serde_json::from_str(last).unwrap();
        assert_eq!(v["failed"], 0);
    }
}

#[test]
fn verify_on_reports_the_cyclic_exception() {
    let (_, out, _) = run_args(&["verify", "on", "--maxD", "10"]);
    assert!(out.contains("SKIP D=-3"));
    assert!(out.contains("PASS D=-4"));
}

#[test]
fn oracle_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cubic.csv");
    let (code, out, _) = run_args(&["oracle", "--X", "1000", "--D", "-23", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("N3(-23) = 1\n"));
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.starts_with("#X=1000\n"));
    let (code, _, _) = run_args(&["verify", "sample_s3", "--maxN", "2", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(&cache).unwrap().starts_with("#X="));
}

#[test]
fn resource_errors_exit_three() {
    assert_eq!(run_args(&["verify", "sample_s3", "--maxN", "1000"]).0, 3);
    assert_eq!(run_args(&["constant", "--ell", "5", "--D", "-4", "--digits", "15"]).0, 3);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dseries");
    let ok = Command::new(bin)
        .args(["count", "--ell", "5", "--D", "13", "--X", "1009"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("M = 6"));
    let bad = Command::new(bin).args(["phi", "--ell", "5", "--D", "-47", "--X", "10"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--fields"));
}
