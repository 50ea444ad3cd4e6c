use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kernel-repr"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn result<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["results"].as_array().unwrap().iter().find(|e| e["name"] == name).map(|e| &e["value"]).unwrap_or(&Value::Null)
}

#[test]
fn represent_then_derepresent_through_stdin() {
    let kernel = fixture("kernel_mixed.json");
    let first = run(&["represent", kernel.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0));
    let second = run_stdin(&["derepresent", "-"], &first.stdout);
    assert_eq!(second.status.code(), Some(0), "{}", String::from_utf8_lossy(&second.stderr));
    let back = &report(&second)["witnesses"][0]["document"];
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&kernel).unwrap()).unwrap();
    let flat = |v: &Value| -> Vec<f64> {
        let mut out = Vec::new();
        let mut stack = vec![v.clone()];
        while let Some(x) = stack.pop() {
            match x {
                Value::Array(a) => stack.extend(a),
                n => out.push(n.as_f64().unwrap()),
            }
        }
        out
    };
    let (got, want) = (flat(&back["blocks"]), flat(&original["blocks"]));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-15 * w.abs(), "{g} vs {w}");
    }
}

#[test]
fn reports_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("operator.json");
    let out = run(&["extract-density", fixture("operator_density.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&path, &out.stdout).unwrap();
    let iso = run(&["check-isometry", path.to_str().unwrap(), "--samples", "500"]);
    assert_eq!(iso.status.code(), Some(0));
    let r = report(&iso);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["parameters"]["samples"], 500);
}

#[test]
fn seed_changes_sampling_but_not_exact_results() {
    let op = fixture("operator_scalar.json");
    let a = report(&run(&["check-positive", op.to_str().unwrap(), "--seed", "1"]));
    let b = report(&run(&["check-positive", op.to_str().unwrap(), "--seed", "2"]));
    assert_eq!(a["status"], b["status"]);
    assert_eq!(a["parameters"]["seed"], 1);
    assert_eq!(b["parameters"]["seed"], 2);
}

#[test]
fn counterexample_respects_max_n() {
    let r = report(&run(&["counterexample", "--max-n", "8"]));
    assert_eq!(r["status"], "pass");
    assert_eq!(r["parameters"]["max_n"], 8);
    let norm = result(&r, "operator_norm[n=8]").as_f64().unwrap();
    assert!((norm - 8f64.powf(-0.25)).abs() < 1e-12);
    assert!(result(&r, "operator_norm[n=16]").is_null());
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    let out = run(&["norm", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["error"]["code"], "E_IO");
    assert!(!out.stderr.is_empty());
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let out = run_stdin(&["norm", "-"], b"{\n  \"kind\": \"operator\",\n  oops\n}");
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["error"]["code"], "E_SYNTAX");
    assert!(r["error"]["location"].as_str().unwrap().starts_with("-:3:"));
}

#[test]
fn usage_errors_still_print_a_report() {
    for args in [&["norm", "--tolerance", "-1", "x.json"][..], &["norm", "--bogus"][..], &["frobnicate"][..]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(report(&out)["status"], "error");
    }
}

#[test]
fn failed_checks_exit_one_with_witnesses() {
    let out = run(&["check-local", fixture("operator_nonlocal.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    assert!(!r["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn non_exact_norms_report_an_interval() {
    let r = report(&run(&["norm", fixture("operator_nonexact.json").to_str().unwrap(), "--samples", "200"]));
    let (lower, upper) = (r["status"]["approx"]["lower"].as_f64().unwrap(), r["status"]["approx"]["upper"].as_f64().unwrap());
    assert!(lower <= upper);
    assert_eq!(result(&r, "operator_norm.exact"), false);
    assert_eq!(result(&r, "operator_norm.lower").as_f64(), Some(lower));
}
