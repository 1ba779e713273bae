mod common;

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sakiadis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

fn number(v: &serde_json::Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn params_reproduces_the_constants() {
    let out = run(&["params", "--format", "json", "--digits", "31"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in ["terms", "digits", "gamma", "C", "kappa", "R_g", "R_F"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["gamma"].as_str().unwrap(), "-1.318799804966662381833956838209");
    assert!(common::C.starts_with(&json["C"].as_str().unwrap()[..30]));
    assert!(common::KAPPA.starts_with(&json["kappa"].as_str().unwrap()[..30]));
    assert!((number(&json["R_g"]) - 3.5).abs() <= 0.2);
    assert!((number(&json["R_F"]) - 4.7).abs() <= 0.2);
}

#[test]
fn params_csv_header() {
    let out = run(&["params", "--terms", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("terms,digits,gamma,C,kappa,R_g,R_F\n"));
    // too few coefficients for a radius estimate
    assert!(text.trim_end().ends_with(",,"));
}

#[test]
fn eval_profile() {
    let out = run(&["eval", "--eta", "0,3.47,30", "--terms", "37", "--digits", "17"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 3);
    let get = |r: usize, c: usize| rows[r][c].parse::<f64>().unwrap();
    assert!(get(0, 1).abs() < 1e-14);
    assert!((get(0, 2) - 1.0).abs() < 1e-12);
    assert!((get(0, 3) + 0.443_748_313_368_861).abs() < 1e-12);
    assert!((get(1, 2) - 0.100_28).abs() < 1e-4);
    assert!((get(2, 1) - 1.616_125_446_804_604).abs() < 1e-10);
    assert!(get(2, 2).abs() < 1e-10);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["eval", "--eta", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["params", "--terms", "1"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn field_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let out = run(&["field", "-o", path, "--terms", "37", "--digits", "17", "--resolution", "21", "--points", "50"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let read = |name: &str| std::fs::read_to_string(dir.path().join(name)).unwrap();
    let streams = csv_rows(&read("streamlines.csv"));
    let wall: Vec<_> = streams.iter().filter(|r| &r[0] == "0").collect();
    assert_eq!(wall.len(), 50);
    assert!(wall.iter().all(|r| r[2].parse::<f64>().unwrap() == 0.0));
    let psis: std::collections::BTreeSet<String> = streams.iter().map(|r| r[0].to_string()).collect();
    assert_eq!(psis.len(), 11);

    let grid = csv_rows(&read("ugrid.csv"));
    assert_eq!(grid.len(), 21 * 21);

    let envelope = csv_rows(&read("envelope.csv"));
    let (x, y): (f64, f64) = (envelope[49][0].parse().unwrap(), envelope[49][1].parse().unwrap());
    assert_eq!(x, 100.0);
    assert!((y / 34.7 - 1.0).abs() < 0.01, "{y}");
}

#[test]
fn field_json_parses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let out = run(&["field", "-o", path, "--format", "json", "--resolution", "5", "--points", "10", "--psi-max", "2"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("envelope.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 10);
}

#[test]
fn validate_passes_by_default() {
    let out = run(&["validate", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["pass"], true);
    assert!(number(&json["kappa_error"]) < 1e-7);
}

#[test]
fn validate_fails_with_too_few_terms() {
    let out = run(&["validate", "--terms", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().any(|r| &r[3] == "false"));
}

#[test]
fn validate_coarse_step_degrades_gracefully() {
    // a coarser RK4 step loosens the gamma agreement but stays far inside tolerance
    let fine = run(&["validate", "--format", "json", "--step", "1e-4"]);
    let coarse = run(&["validate", "--format", "json", "--step", "1e-2"]);
    let fine: serde_json::Value = serde_json::from_str(&stdout(&fine)).unwrap();
    let coarse: serde_json::Value = serde_json::from_str(&stdout(&coarse)).unwrap();
    assert!(number(&coarse["gamma_error"]) >= number(&fine["gamma_error"]));
    assert!(number(&coarse["gamma_error"]) < 1e-4);
    // a step too large for the singular start is a computation error
    assert_eq!(run(&["validate", "--step", "0.5"]).status.code(), Some(3));
}

#[test]
fn convergence_table() {
    let out = run(&["convergence", "--max-terms", "30"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    // one row per term count from 2
    assert_eq!(rows.len(), 29);
    let err = |n: usize, col: usize| rows[n - 2][col].parse::<f64>().unwrap();
    assert_eq!(rows[20][0].parse::<usize>().unwrap(), 22);
    assert!(err(22, 1) < 1e-16);
    assert!(err(23, 2) < 1e-16);
    assert!(err(23, 3) < 1e-15);
    assert!(err(5, 1) > err(30, 1));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        assert!(run(&["eval", "--eta", "0.5,1,2", "-o", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(stdout(&run(&["params"])), stdout(&run(&["params"])));
}
