use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_siegel-theta"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(name).display().to_string()
}

#[test]
fn cycle_values() {
    let out = run(&["cycle", "--p", "7", "--r", "1", "--k", "13"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["values"], json!([3, 11, 13]));
}

#[test]
fn cycle_matches_golden() {
    let out = run(&["cycle", "--p", "7", "--r", "1", "--k", "10"]);
    let golden = fs::read(data("golden/cycle_p7_k10.json")).unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn cycle_excluded_residue() {
    let out = run(&["cycle", "--p", "7", "--r", "1", "--k", "12"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "congruence_excluded");
}

#[test]
fn cycle_indeterminate_semi() {
    let out = run(&["cycle", "--p", "7", "--r", "1", "--k", "13", "--semi-ordinary"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "indeterminate_step");
    let out = run(&["cycle", "--p", "7", "--r", "1", "--k", "13", "--semi-ordinary", "--solver"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out).as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn unknown_flag_is_rejected() {
    let out = run(&["cycle", "--p", "7", "--r", "1", "--k", "13", "--frobnicate"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn theta_apply_single_file() {
    let out = run(&["theta-apply", "--in", &data("data/f_p5.json")]);
    assert_eq!(out.status.code(), Some(0));
    // det [1,1,1] = 3 and 3 * 9^-1 = 2 mod 5; det [0,0,2] = 0.
    let expected = "{\"N\":3,\"coeffs\":[{\"T\":[1,1,1],\"v\":[2,3]}],\"max_trace\":4,\"p\":5,\"weight\":[11,10]}\n";
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn theta_apply_batch_to_file_is_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.json");
    fs::write(&zero, r#"{"p":5,"N":4,"weight":[3,3],"max_trace":2,"coeffs":[]}"#).unwrap();
    let dest = dir.path().join("out.json");
    let f = data("data/f_p5.json");
    let out = run(&[
        "theta-apply", "--in", &f, zero.to_str().unwrap(), &f,
        "--iterations", "4", "--out", dest.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&fs::read(&dest).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    assert_eq!(arr[0], arr[2]);
    assert_eq!(arr[1]["N"], 4);
    // 2^4 = 1 mod 5, so four applications restore the unit coefficients.
    assert_eq!(arr[0]["coeffs"], json!([{"T": [1, 1, 1], "v": [1, 4]}]));
}

#[test]
fn theta_apply_rejects_level_divisible_by_p() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    fs::write(&f, r#"{"p":5,"N":10,"weight":[3,3],"max_trace":2,"coeffs":[]}"#).unwrap();
    let out = run(&["theta-apply", "--in", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "invalid_level");
}

#[test]
fn parse_and_io_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.json");
    fs::write(&f, "{\"p\": 5,").unwrap();
    let out = run(&["psingular-check", "--in", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["code"], "parse");
    let missing = dir.path().join("missing.json");
    let out = run(&["psingular-check", "--in", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["code"], "io");
}

#[test]
fn unknown_field_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("extra.json");
    fs::write(&f, r#"{"p":5,"N":4,"weight":[3,3],"max_trace":2,"coeffs":[],"extra":1}"#).unwrap();
    let out = run(&["psingular-check", "--in", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "invalid_document");
}

#[test]
fn psingular_check_after_theta() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let f = data("data/f_p5.json");
    let out = run(&["psingular-check", "--in", &f]);
    assert_eq!(stdout_json(&out)["weakly_p_singular"], false);
    run(&["theta-apply", "--in", &f, "--out", g.to_str().unwrap()]);
    let out = run(&["psingular-check", "--in", g.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["weakly_p_singular"], false);
    assert_eq!(v["scope"], "within max_trace");
}

#[test]
fn serre_weight_with_selector() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    fs::write(&d, r#"{"type":"siegel","p":7,"a":2,"b":0,"c":0,"ram":{"t3":"peu"}}"#).unwrap();
    let out = run(&["serre-weight", "--in", d.to_str().unwrap(), "--with-selector"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out),
        json!({"k1": 9, "k2": 8, "w": 0, "selector": {"j": 0, "use_theta3": false}})
    );
}

#[test]
fn serre_weight_descriptor_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    fs::write(&d, r#"{"type":"siegel","p":7,"a":1,"b":2,"c":0,"ram":{"t3":"peu"}}"#).unwrap();
    let out = run(&["serre-weight", "--in", d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "range");
    fs::write(&d, r#"{"type":"hecke","p":7}"#).unwrap();
    let out = run(&["serre-weight", "--in", d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "invalid_document");
}

#[test]
fn serre_weight_irreducible_reports_digits() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    fs::write(&d, r#"{"type":"irreducible","p":5,"a":586,"c":0,"candidates":[[4,3,0],[3,3,5]]}"#).unwrap();
    let out = run(&["serre-weight", "--in", d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["omega4"], json!({"digits": [1, 2, 3, 4], "distinct": true}));
    assert_eq!((v["k1"].as_i64(), v["k2"].as_i64(), v["w"].as_i64()), (Some(3), Some(3), Some(5)));
}

#[test]
fn verify_local_matches_golden() {
    let out = run(&["verify-local", "--r-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = fs::read(data("golden/verify_local_r1.json")).unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn verify_local_higher_r() {
    let out = run(&["verify-local", "--r-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 10);
    assert!(entries.iter().all(|e| e["pole_order_general"].as_u64().unwrap() <= 2));
    let r0 = &entries[0]["general_vs_corollary"];
    assert_eq!(r0["det_c"], "0");
    assert_eq!(r0["cross"], "(4*k2)*c12*D12(F0)");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let f = data("data/f_p5.json");
    let a = run(&["theta-apply", "--in", &f, "--iterations", "3"]);
    let b = run(&["theta-apply", "--in", &f, "--iterations", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
