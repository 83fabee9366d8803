use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fractal-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn level_zero_is_the_degree() {
    let out = run(&["spectrum", "--group", "gamma", "--level", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dim"], 1);
    assert_eq!(v["eigen"][0]["value"], "4");
    assert_eq!(v["eigen"][0]["mult"], 1);
    assert_eq!(v["method"], "closed-form");
}

#[test]
fn both_methods_agree() {
    let out = run(&[
        "spectrum", "--group", "gammabar", "--level", "4", "--method", "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["comparison"]["pass"], true);
    assert_eq!(v["closed_form"]["dim"], 81);
    assert_eq!(v["numeric"]["method"], "numeric");
}

#[test]
fn csv_spectrum_and_matrix_dump() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let mat = dir.path().join("m.csv");
    let out = run(&[
        "spectrum",
        "--group",
        "g",
        "--level",
        "2",
        "--format",
        "csv",
        "--out",
        csv.to_str().unwrap(),
        "--dump-matrix",
        mat.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next(), Some("value,mult"));
    assert_eq!(text.lines().count(), 5);
    assert_eq!(std::fs::read_to_string(mat).unwrap().lines().count(), 4);
}

#[test]
fn graphs() {
    let out = run(&["graph", "--group", "gamma", "--level", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    let nodes = dot
        .lines()
        .filter(|l| l.trim_start().starts_with('"') && !l.contains("->"))
        .count();
    assert_eq!(nodes, 729);

    let out = run(&[
        "graph",
        "--group",
        "gtilde",
        "--level",
        "5",
        "--construction",
        "subst",
        "--verify",
        "--format",
        "csv",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("# basepoint,"));
    assert_eq!(csv.lines().count(), 2 + 4 * 32);
}

#[test]
fn measures() {
    let out = run(&[
        "measure", "--group", "gtilde", "--level", "10", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ks: f64 = v["ks_distance_histogram"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(ks <= 0.05, "{ks}");

    let out = run(&["measure", "--group", "gammabar", "--level", "4", "--kesten"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("location,mass"));
    let total: f64 = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn julia_radicals() {
    let out = run(&["julia", "--lambda", "6", "--depth", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let vals: Vec<f64> = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().parse().unwrap())
        .collect();
    assert_eq!(vals.len(), 2);
    assert!((vals[0] + 6f64.sqrt()).abs() < 1e-12 && (vals[1] - 6f64.sqrt()).abs() < 1e-12);

    let out = run(&[
        "julia", "--lambda", "45/16", "--depth", "2", "--group", "gammabar",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["spectral_image"].as_array().unwrap().len(), 16);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(
        run(&["spectrum", "--group", "nope", "--level", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["spectrum", "--group", "g", "--level", "x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["measure", "--group", "g", "--level", "3", "--bins", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["julia", "--lambda=-1", "--depth", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["julia", "--lambda", "6", "--depth", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["spectrum", "--group", "g", "--level", "30"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["spectrum", "--group", "gamma", "--level", "6", "--method", "numeric"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn dimension_cap_from_environment() {
    let capped = bin()
        .args([
            "spectrum", "--group", "g", "--level", "5", "--method", "numeric",
        ])
        .env("FRACTAL_SPECTRA_MAX_DIM", "16")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    let raised = bin()
        .args([
            "spectrum", "--group", "gamma", "--level", "6", "--method", "numeric",
        ])
        .env("FRACTAL_SPECTRA_MAX_DIM", "729")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &[
            "spectrum",
            "--group",
            "gammabarbar",
            "--level",
            "4",
            "--method",
            "numeric",
        ][..],
        &[
            "graph",
            "--group",
            "gammabar",
            "--level",
            "4",
            "--construction",
            "subst",
        ][..],
        &[
            "measure", "--group", "g", "--level", "8", "--format", "json",
        ][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn verify_writes_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("summary.json");
    let out = run(&["verify", "--seed", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["all_pass"], true);
    assert!(v["failed"].as_array().unwrap().is_empty());
}
