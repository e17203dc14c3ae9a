use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

fn ltonp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltonp")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn c(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn scalar_problem(dir: &Path, b: f64) -> PathBuf {
    write(dir, "problem.json", &json!({"Z": [[0]], "B": [[1]], "Btilde": [[b]]}))
}

#[test]
fn solve_scalar_central() {
    let dir = tempfile::tempdir().unwrap();
    let p = scalar_problem(dir.path(), 0.5);
    let out = ltonp(&["solve", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["pick"]["classification"], "StrictlyPositive");
    let (re, im) = c(&v["solution"]["delta"][0][0]);
    assert!((re - 0.5).abs() < 1e-14 && im.abs() < 1e-14);
    let (q0, _) = c(&v["Q0"][0][0]);
    assert!((q0 - 0.75f64.sqrt()).abs() < 1e-14);
}

#[test]
fn verify_exit_code_follows_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let p = scalar_problem(dir.path(), 0.5);
    let x = write(dir.path(), "x.json", &json!({"constant": [[0.3]]}));
    let ok = ltonp(&["verify", p.to_str().unwrap(), "--param", x.to_str().unwrap()]);
    assert!(ok.status.success());
    assert_eq!(stdout_json(&ok)["passes"], true);
    // a negative tolerance cannot be met
    let strict = ltonp(&["verify", p.to_str().unwrap(), "--tol=-1"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn indefinite_problem_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.json", &json!({"Z": [[0]], "B": [[0.5]], "Btilde": [[1]]}));
    let out = ltonp(&["solve", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not strictly positive"));
}

#[test]
fn pair_and_entropy_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = scalar_problem(dir.path(), 0.5);
    let out = ltonp(&["pair", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["e"], 1);
    assert!(v["residuals"]["semiunit1"].as_f64().unwrap() < 1e-14);

    let x = write(dir.path(), "x.json", &json!({"constant": [[0.3]]}));
    let out = ltonp(&["entropy", p.to_str().unwrap(), "--param", x.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((c(&v["central"][0][0]).0 - 0.75).abs() < 1e-14);
    // gap (1 − b²)|x|² for the one-point problem
    assert!((v["gap_min_eig"].as_f64().unwrap() - 0.75 * 0.09).abs() < 1e-9);
}

#[test]
fn leech_and_clift() {
    let dir = tempfile::tempdir().unwrap();
    let l = write(dir.path(), "leech.json", &json!({"G": [[[1]]], "K": [[[0.5]]], "N": 1}));
    let out = ltonp(&["leech", l.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["classification"], "StrictlyPositive");
    assert!(v["residuals"][0]["residual"].as_f64().unwrap() < 1e-14);

    let singular = write(dir.path(), "eq.json", &json!({"G": [[[1]]], "K": [[[1]]], "N": 1}));
    let out = ltonp(&["leech", singular.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["classification"], "NonnegativeSingular");

    let p = scalar_problem(dir.path(), 0.5);
    assert!(ltonp(&["clift", p.to_str().unwrap()]).status.success());
    let bad = write(dir.path(), "nc.json", &json!({"Z": [[0.5]], "B": [[0.5]], "Btilde": [[0]]}));
    let out = ltonp(&["clift", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_is_deterministic_and_solvable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(ltonp(&["sample", "--seed", "42", "--out", a.to_str().unwrap()]).status.success());
    assert!(ltonp(&["--seed", "42", "sample", "--out", b.to_str().unwrap()]).status.success());
    let sa = std::fs::read_to_string(&a).unwrap();
    assert_eq!(sa, std::fs::read_to_string(&b).unwrap());
    let v: Value = serde_json::from_str(&sa).unwrap();
    let p = write(dir.path(), "p.json", &v["problem"]);
    let x = write(dir.path(), "x.json", &v["parameter"]);
    let out = ltonp(&["verify", p.to_str().unwrap(), "--param", x.to_str().unwrap(), "--grid", "64"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));

    let out = ltonp(&["sample", "--seed", "1", "--n", "3", "--p", "2", "--q", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["problem"]["Z"].as_array().unwrap().len(), 3);
    assert_eq!(v["problem"]["B"][0].as_array().unwrap().len(), 2);
}

#[test]
fn dynamic_parameter_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = scalar_problem(dir.path(), 0.5);
    // X(λ) = λ
    let x = write(
        dir.path(),
        "x.json",
        &json!({"system": {"alpha": [[0]], "beta": [[1]], "gamma": [[1]], "delta": [[0]]}}),
    );
    let out = ltonp(&["solve", p.to_str().unwrap(), "--param", x.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["solution"]["alpha"].as_array().unwrap().len(), 2);
    assert!(v["diagnostics"]["schur_margin"].as_f64().unwrap() <= 1e-8);
}
