use std::fs;

use gbbn::bench::{dump_front, eta_sweep, run_bench, run_starts, BenchConfig, EtaGroup, Execution, Format, RunStats};
use gbbn::pareto::dominates;
use gbbn::problems::by_name;
use gbbn::sampling::sample_starts;
use gbbn::solvers::{Algorithm, SolverConfig};

fn small(problems: &[&str], runs: usize) -> BenchConfig {
    BenchConfig {
        problems: problems.iter().map(|s| s.to_string()).collect(),
        runs,
        ..Default::default()
    }
}

#[test]
fn algorithms_share_start_points() {
    let report = run_bench(&small(&["WIT2", "Deb"], 20)).unwrap();
    assert_eq!(report.rows.len(), 6);
    for pair in report.rows.chunks(3) {
        assert!(pair.iter().all(|r| r.starts_hash == pair[0].starts_hash));
        assert!(pair.iter().all(|r| r.theta_small + r.max_iter + r.backtrack_fail == r.runs));
    }
    assert_ne!(report.rows[0].starts_hash, report.rows[3].starts_hash);
}

#[test]
fn changing_the_seed_changes_the_starts() {
    let a = run_bench(&small(&["WIT2"], 10)).unwrap();
    let b = run_bench(&BenchConfig {
        seed: 1,
        ..small(&["WIT2"], 10)
    })
    .unwrap();
    assert_ne!(a.rows[0].starts_hash, b.rows[0].starts_hash);
}

#[test]
fn critical_start_costs_nothing() {
    let p = by_name("WIT6").unwrap();
    let runs = run_starts(
        Algorithm::Gbbn,
        &p,
        &[vec![2.0, 2.0]],
        &SolverConfig::for_problem(&p),
        Execution::Sequential,
    );
    let s = RunStats::from_runs(&runs);
    assert_eq!(s.mean_iter, 0.0);
    assert_eq!(s.mean_stepsize, 0.0);
    assert_eq!(s.theta_small, 1);
}

#[test]
fn json_and_csv_reports_are_written() {
    let dir = tempfile::tempdir().unwrap();
    for format in [Format::Csv, Format::Json] {
        let cfg = BenchConfig {
            output_dir: Some(dir.path().to_path_buf()),
            format,
            ..small(&["JOS1a"], 5)
        };
        run_bench(&cfg).unwrap();
    }
    let csv = fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("bench.json")).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
    assert_eq!(json["seed"], 0);
}

#[test]
fn eta_sweep_rows_follow_the_requested_values() {
    let cfg = BenchConfig {
        runs: 10,
        ..Default::default()
    };
    let rows = eta_sweep(EtaGroup::Eta3, &[0.0, 1.0, 3.0], &cfg).unwrap();
    assert_eq!(rows.iter().map(|r| r.eta).collect::<Vec<_>>(), vec![0.0, 1.0, 3.0]);
    assert!(rows.iter().all(|r| r.mean_iter.is_finite() && r.mean_feval >= r.mean_iter));
    assert!(eta_sweep(EtaGroup::Eta3, &[-1.0], &cfg).is_err());
}

#[test]
fn front_flags_match_brute_force_dominance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("front.csv");
    let p = by_name("Hil").unwrap();
    let front = dump_front(&p, Algorithm::Gbbn, &small(&[], 60), &path).unwrap();
    assert_eq!(front.f.len(), 60);
    for i in 0..front.f.len() {
        let dominated = front.f.iter().any(|q| dominates(q, &front.f[i]));
        assert_eq!(front.nondominated[i], !dominated);
    }
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 61);
    assert!(text.starts_with("run,f1,f2,x1,x2,nondominated"));
}

#[test]
fn bench_starts_match_the_sampler() {
    let p = by_name("SD").unwrap();
    let starts = sample_starts(&p, 7, 0);
    let report = run_bench(&small(&["SD"], 7)).unwrap();
    assert_eq!(report.rows[0].starts_hash, format!("{:016x}", gbbn::bench::starts_hash(&starts)));
}
