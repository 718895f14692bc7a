use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_raintensity"));
    c.env_remove("RAINTENSITY_SEED");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

fn counts() -> String {
    std::fs::read_to_string(data("grouped_counts.txt"))
        .unwrap()
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .to_string()
}

#[test]
fn grai_curve_emits_requested_rows() {
    let out = run(&["grai-curve", "exp(b=1)", "--alpha", "0", "--points", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# grai alpha="));
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.split('\t').count() == 2));
}

#[test]
fn chi_square_on_grouped_counts() {
    let c = counts();
    let r = ok_json(&[
        "gof",
        "invllog(gamma=3.7990,lambda=0.4957)",
        "--test",
        "chi2",
        "--width",
        "0.21",
        "--nparams",
        "1",
        "--counts",
        &c,
        "--total",
        "1000",
    ]);
    assert_eq!(r["schema_version"], 1);
    assert!((r["statistic"].as_f64().unwrap() - 9.3209).abs() < 0.02);
    assert_eq!(r["dof"], 7);
    assert!((r["p_value"].as_f64().unwrap() - 0.2304).abs() < 0.005);
}

#[test]
fn chi_square_writes_class_table() {
    let dir = tempfile::tempdir().unwrap();
    let c = counts();
    let out = run(&[
        "gof",
        "invllog(gamma=3.7990,lambda=0.4957)",
        "--test",
        "chi2",
        "--width",
        "0.21",
        "--nparams",
        "1",
        "--counts",
        &c,
        "--total",
        "1000",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["classes.tsv", "gof.json"]);
    let table = std::fs::read_to_string(dir.path().join("classes.tsv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 9);
}

#[test]
fn ks_on_failure_times() {
    let input = data("failure_times.csv");
    let r = ok_json(&[
        "gof",
        "invmw(gamma=0.3441,lambda=549.9663,delta=31.6785)",
        "--test",
        "ks",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert!((r["statistic"].as_f64().unwrap() - 0.1496).abs() < 0.002);
    assert!((r["p_value"].as_f64().unwrap() - 0.7072).abs() < 0.03);
}

#[test]
fn fit_failure_times() {
    let input = data("failure_times.csv");
    let r = ok_json(&[
        "fit",
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "0",
        "--model",
        "affine",
        "--bandwidth",
        "0.0147",
    ]);
    assert_eq!(r["sample_size"], 20);
    assert!((r["ls"]["intercept"].as_f64().unwrap() - 0.3441).abs() < 0.05);
    assert!((r["ls"]["slope"].as_f64().unwrap() - 31.6785).abs() < 3.0);
    assert_eq!(r["family"]["family"], "inv_modified_weibull");
}

#[test]
fn simulate_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&[
        "simulate",
        "invllog(gamma=4,lambda=0.5)",
        "--n",
        "1000",
        "--seed",
        "88",
        "--output-dir",
        d,
    ]);
    assert!(out.status.success());
    let sample = dir.path().join("sample.csv");
    let r = ok_json(&[
        "fit",
        "--input",
        sample.to_str().unwrap(),
        "--alpha",
        "-1",
        "--model",
        "constant",
    ]);
    let g = r["ls"]["intercept"].as_f64().unwrap();
    assert!((3.65..=4.35).contains(&g), "{g}");
}

#[test]
fn seed_falls_back_to_environment() {
    let args = ["simulate", "exp(b=1)", "--n", "5"];
    let a = bin()
        .args(args)
        .env("RAINTENSITY_SEED", "7")
        .output()
        .unwrap();
    let b = run(&[&args[..], &["--seed", "7"]].concat());
    let c = run(&[&args[..], &["--seed", "8"]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn outputs_are_reproducible() {
    let input = data("failure_times.csv");
    let args = [
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "0.5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn estimate_then_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let input = data("failure_times.csv");
    let out = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "0",
        "--output-dir",
        d,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let curve = dir.path().join("empirical_grai.tsv");
    // F(0.098) = exp(-k) = 1/2
    let anchor = format!("0.098,{}", std::f64::consts::LN_2);
    let out = run(&[
        "reconstruct",
        "--curve",
        curve.to_str().unwrap(),
        "--anchor",
        &anchor,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let cdf: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(cdf.windows(2).all(|w| w[1] >= w[0]));
    assert!(cdf.iter().all(|&v| (0.0..=1.0).contains(&v)));
    // alpha <= 0 needs an anchor
    let out = run(&[
        "reconstruct",
        "--curve",
        curve.to_str().unwrap(),
        "--alpha",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn order_and_implication() {
    let r = ok_json(&["order", "exp(b=2)", "exp(b=1)", "--alpha", "1"]);
    assert_eq!(r["direction"], "greater_eq");
    assert_eq!(r["evidence"], "numerical evidence");
    let r = ok_json(&[
        "order",
        "invllog(gamma=3,lambda=1)",
        "invllog(gamma=5,lambda=1)",
        "--alpha",
        "-1",
        "--implication",
    ]);
    assert_eq!(r["premise_holds"], false);
    assert!(r["conclusion_holds"].is_null());
}

#[test]
fn dist_eval_reports_values() {
    let r = ok_json(&[
        "dist-eval",
        "invllog(gamma=4,lambda=0.5)",
        "--x",
        "0.5",
        "--alpha",
        "-1",
    ]);
    let p = &r["points"][0];
    assert_eq!(p["cdf"], 0.5);
    assert!((p["grai"].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn validation_errors_exit_2_with_envelope() {
    let bad = data("bad_line3.csv");
    let out = run(&[
        "fit",
        "--input",
        bad.to_str().unwrap(),
        "--alpha",
        "0",
        "--model",
        "affine",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let e = error_of(&out);
    assert_eq!(e["error"]["code"], "input_error");
    assert!(e["error"]["message"].as_str().unwrap().contains("line 3"));

    let neg = data("negative.csv");
    let out = run(&["estimate", "--input", neg.to_str().unwrap(), "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let input = data("failure_times.csv");
    let out = run(&[
        "fit",
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "2",
        "--model",
        "affine",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["error"]["code"], "unsupported");

    let out = run(&["grai-curve", "nope(a=1)", "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["error"]["code"], "usage_error");
    assert!(out.stdout.is_empty());
}

#[test]
fn numerical_failures_exit_3() {
    // int_0^x L(t)/t dt diverges for a constant curve at alpha > 0
    let out = run(&[
        "reconstruct",
        "--constant",
        "2",
        "--alpha",
        "1",
        "--x",
        "0.5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(error_of(&out)["error"]["code"], "condition_violation");
}
