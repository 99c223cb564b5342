use std::fs;
use std::process::{Command, Output};

fn gbbn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbbn")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_problems_prints_the_suite() {
    let o = gbbn(&["list-problems"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 22);
    for name in ["Imbalance1", "JOS1d", "WIT6", "TRIDIA2", "LTDZ", "SD"] {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn solve_prints_a_run_record() {
    let o = gbbn(&["solve", "--problem", "JOS1c", "--algo", "gbbn", "--seed", "3"]);
    assert!(o.status.success());
    let run: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(run["algorithm"], "gbbn");
    assert_eq!(run["iterations"], 1);
    assert_eq!(run["fevals"], 2);
    assert_eq!(run["terminated_by"], "theta_small");
    assert_eq!(run["x_final"].as_array().unwrap().len(), 200);
}

#[test]
fn solve_accepts_an_explicit_start() {
    let o = gbbn(&["solve", "--problem", "WIT6", "--algo", "sdmo", "--x0", "2,2", "--eta", "0"]);
    assert!(o.status.success());
    let run: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(run["iterations"], 0);

    let o = gbbn(&["solve", "--problem", "Deb", "--x0", "0.5,-1.0"]);
    assert!(!o.status.success(), "start outside the box was accepted");
    let o = gbbn(&["solve", "--problem", "Deb", "--x0", "0.5"]);
    assert!(!o.status.success(), "short start was accepted");
}

#[test]
fn unknown_names_fail() {
    assert!(!gbbn(&["solve", "--problem", "ZDT1"]).status.success());
    assert!(!gbbn(&["solve", "--problem", "Deb", "--algo", "newton"]).status.success());
    assert!(!gbbn(&["solve", "--problem", "Deb", "--eta", "-1"]).status.success());
}

#[test]
fn bench_is_repeatable_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let mut tables = Vec::new();
    for (sub, extra) in [("a", None), ("b", None), ("c", Some("--sequential"))] {
        let out = dir.path().join(sub);
        let mut args = vec!["bench", "--problems", "WIT3,Deb", "--runs", "15", "--seed", "4", "--out", out.to_str().unwrap()];
        args.extend(extra);
        assert!(gbbn(&args).status.success());
        let csv = fs::read_to_string(out.join("bench.csv")).unwrap();
        let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
        let t = header.iter().position(|h| *h == "mean_time_ms").unwrap();
        let stripped: Vec<String> = csv
            .lines()
            .map(|l| l.split(',').enumerate().filter(|(i, _)| *i != t).map(|(_, v)| v).collect::<Vec<_>>().join(","))
            .collect();
        assert_eq!(stripped.len(), 7);
        tables.push(stripped);
    }
    assert_eq!(tables[0], tables[1]);
    assert_eq!(tables[0], tables[2]);
}

#[test]
fn bench_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = gbbn(&["bench", "--problems", "JOS1a", "--algos", "gbb", "--runs", "5", "--out", out, "--format", "json"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("bench.json")).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["mean_iter"], 1.0);
}

#[test]
fn eta_sweep_writes_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = gbbn(&["eta-sweep", "--group", "eta40", "--etas", "0,10,40", "--runs", "5", "--out", out]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("eta_sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn front_writes_values_points_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("deb.csv");
    let o = gbbn(&["front", "--problem", "Deb", "--runs", "25", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "run,f1,f2,x1,x2,nondominated");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().any(|r| r.ends_with(",1")));
}

#[test]
fn check_gradients_passes_on_the_suite() {
    let o = gbbn(&["check-gradients"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with("ok")).count(), 21);
    // a tolerance below rounding noise must fail
    assert!(!gbbn(&["check-gradients", "--tol", "0"]).status.success());
}
