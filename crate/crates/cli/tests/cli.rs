use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn diskfun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskfun")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = diskfun(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&ok(&a)).unwrap()
}

#[test]
fn integral_of_quadratic() {
    let v: f64 = ok(&["integrate", "-x^2 - 3*x*y - (y-1)^2"]).trim().parse().unwrap();
    assert!((v + 1.5 * PI).abs() < 1e-13);
}

#[test]
fn evaluation_in_both_coordinate_systems() {
    let out = ok(&["eval", "x*y", "--at", "0.5,0.5", "--at", "0,0"]);
    let vals: Vec<f64> = out.lines().map(|l| l.parse().unwrap()).collect();
    assert!((vals[0] - 0.25).abs() < 1e-15 && vals[1].abs() < 1e-15);
    let polar: f64 = ok(&["eval", "--polar", "r^2*cos(2*t)", "--at", "0.3,0.8"]).trim().parse().unwrap();
    assert!((polar - 0.64 * 0.6f64.cos()).abs() < 1e-14);
}

#[test]
fn csv_output() {
    let out = ok(&["eval", "x+y", "--at", "0.1,0.2", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,y,value");
    let v: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((v - 0.3).abs() < 1e-15);
}

#[test]
fn norm_and_derivative() {
    let n: f64 = ok(&["norm", "1"]).trim().parse().unwrap();
    assert!((n - PI.sqrt()).abs() < 1e-13);
    let d = json(&["diff", "--var", "y", "x*y^2", "--at", "0.5,0.5"]);
    let v = d["points"][0]["value"].as_f64().unwrap();
    assert!((v - 0.5).abs() < 1e-13);
}

#[test]
fn singular_values_are_sorted() {
    let d = json(&["svd", "wave", "--count", "5"]);
    let s: Vec<f64> = d["sigma"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(s.len(), 5);
    assert!(s.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn poisson_with_boundary_data() {
    let d = json(&["poisson", "-4", "--g", "x", "--at", "0.3,0.4"]);
    let v = d["points"][0]["value"].as_f64().unwrap();
    assert!((v - (0.75 + 0.3)).abs() < 1e-13, "{v}");
    assert!(d["report"]["method"].is_string());
}

#[test]
fn coefficient_file_feeds_poisson() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let p = path.to_str().unwrap();
    ok(&["approx", "-4", "--format", "json", "--out", p]);
    let from_file = json(&["poisson", p, "--at", "0.6,0"]);
    let v = from_file["points"][0]["value"].as_f64().unwrap();
    assert!((v - 0.64).abs() < 1e-13);
}

#[test]
fn output_is_byte_stable() {
    let args = ["plotdata", "wave", "--grid", "5x8", "--format", "json"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn plotdata_matches_schema() {
    let schema: Value = serde_json::from_str(&ok(&["schema"])).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for f in ["wave", "phi1", "x^2 + y"] {
        let doc = json(&["plotdata", f, "--grid", "7x12"]);
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{f}: {errors:?}");
        let rank = doc["rank"].as_u64().unwrap() as usize;
        assert_eq!(doc["skeleton"]["lines"].as_array().unwrap().len(), rank);
        assert_eq!(doc["skeleton"]["circles"].as_array().unwrap().len(), rank);
        assert_eq!(doc["grid"]["values"].as_array().unwrap().len(), 7);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["bogus"][..],
        &["eval", "foo", "--at", "0,0"],
        &["eval", "x", "--at", "2,2"],
        &["eval", "x"],
        &["eval", "1/(x", "--at", "0,0"],
        &["integrate", "r", "--format", "csv"],
        &["approx", "x", "--tol", "0"],
        &["plotdata", "x", "--grid", "0x3"],
    ] {
        let o = diskfun(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let e = diskfun(&["eval", "1/(x", "--at", "0,0"]);
    assert!(String::from_utf8_lossy(&e.stderr).contains("offset 4"));
}

#[test]
fn numeric_failures_exit_1() {
    let o = diskfun(&["approx", "sqrt(x - 1)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn demo_passes() {
    let out = ok(&["demo"]);
    assert!(out.lines().all(|l| !l.starts_with("FAIL")), "{out}");
}
