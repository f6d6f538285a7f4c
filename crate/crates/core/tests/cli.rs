use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extropy-kit"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn aircond() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/aircond.csv")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn measure_pareto_example() {
    let out = run(&[
        "measure",
        "--kind",
        "residual-min",
        "--dist",
        "pareto2:k=1,h=2",
        "--n",
        "1",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], "extropy-kit/1");
    assert_eq!(v["command"], "measure");
    assert_eq!(v["results"]["method"], "closed_form");
    assert!((v["results"]["signed_value"].as_f64().unwrap() + 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn estimate_on_air_conditioning_data() {
    let path = aircond();
    let out = run(&["estimate", "--input", &path, "--kind", "past-max", "--n", "1,2,3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let vals: Vec<f64> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["signed_value"].as_f64().unwrap())
        .collect();
    assert_eq!(vals.len(), 3);
    assert!(vals.iter().all(|x| *x < 0.0));
    assert!(vals.windows(2).all(|p| p[0] <= p[1]));
}

#[test]
fn bootstrap_interval_brackets_estimate() {
    let path = aircond();
    let out = run(&[
        "estimate",
        "--input",
        &path,
        "--kind",
        "residual-min",
        "--n",
        "2",
        "--bootstrap",
        "200",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &json(&out)["results"][0];
    let (lo, hi) = (r["ci"][0].as_f64().unwrap(), r["ci"][1].as_f64().unwrap());
    let v = r["signed_value"].as_f64().unwrap();
    assert!(lo <= v && v <= hi, "{r}");
}

#[test]
fn gpd_characterization_rejects_weibull() {
    let out = run(&["characterize", "gpd", "--dist", "weibull:k=1,h=2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["results"]["verdict"]["holds"], false);
    assert!(v["results"]["verdict"]["witness"].is_number());
    assert_eq!(v["results"]["shape"], "finite_range_type");
}

#[test]
fn dynamic_csv_has_header_and_rows() {
    let out = run(&[
        "--format",
        "csv",
        "dynamic",
        "--kind",
        "residual-min",
        "--dist",
        "weibull:k=1,h=2",
        "--n",
        "2",
        "--t-grid",
        "5:0.1:0.9",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("t,signed_value,magnitude"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("out.json");
    let args = [
        "measure",
        "--kind",
        "past-max",
        "--dist",
        "power:b=2,c=3",
        "--weight",
        "identity",
        "--n",
        "2",
    ];
    let direct = run(&args);
    let mut with_file = vec!["--output", file.to_str().unwrap()];
    with_file.extend(args);
    let out = run(&with_file);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&file).unwrap(), direct.stdout);
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = [
        "mc",
        "--kind",
        "residual-min",
        "--dist",
        "exp:lambda=2",
        "--n",
        "3",
        "--replicates",
        "5000",
        "--seed",
        "9",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let path = aircond();
    let boot = [
        "estimate",
        "--input",
        &path,
        "--kind",
        "residual-min",
        "--n",
        "1",
        "--bootstrap",
        "100",
        "--seed",
        "3",
    ];
    assert_eq!(run(&boot).stdout, run(&boot).stdout);
}

#[test]
fn json_envelope_round_trips() {
    let out = run(&[
        "order-check",
        "--kind",
        "hazard",
        "--dist",
        "exp:lambda=2",
        "--dist",
        "exp:lambda=1",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    for key in ["schema", "command", "inputs", "results", "warnings"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    assert_eq!(v["results"]["holds"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["measure", "--dist", "exp:lambda=1"]).status.code(), Some(1));
    assert_eq!(
        run(&["measure", "--kind", "residual-min", "--dist", "nope:x=1"])
            .status
            .code(),
        Some(1)
    );
    let out = run(&[
        "measure",
        "--kind",
        "residual-min",
        "--dist",
        "folded-cramer:h=0.5",
        "--weight",
        "identity",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["code"], "diverged");
}
