//! Benchmark harness: shared seeded starts, per-algorithm statistics,
//! η sweeps and front dumps.
//!
//! Runs are independent. With the `parallel` feature they are spread over
//! the rayon pool; results are collected in start order, so reports are the
//! same for either execution mode.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::direction::Normalization;
use crate::error::{Error, Result};
use crate::pareto::nondominated_mask;
use crate::problems::{by_name, suite, Problem, VectorObjective};
use crate::sampling::{sample_starts, SAMPLER_VERSION};
use crate::solvers::{solve, Algorithm, RunRecord, SolverConfig, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidConfig(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when built with the `parallel` feature, otherwise the
    /// same as `Sequential`.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Problem names; empty means the whole suite.
    pub problems: Vec<String>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    pub seed: u64,
    /// Replaces each problem's default η for GBBN; `0` selects unit scaling.
    pub eta_override: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub format: Format,
    pub execution: Execution,
    /// Base solver settings; η is filled in per problem.
    pub solver: SolverConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            problems: Vec::new(),
            algorithms: Algorithm::ALL.to_vec(),
            runs: 200,
            seed: 0,
            eta_override: None,
            output_dir: None,
            format: Format::Csv,
            execution: Execution::default(),
            solver: SolverConfig::default(),
        }
    }
}

impl BenchConfig {
    pub fn resolve_problems(&self) -> Result<Vec<Problem>> {
        if self.problems.is_empty() {
            return Ok(suite());
        }
        self.problems.iter().map(|name| by_name(name)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidConfig("no algorithms selected".into()));
        }
        if let Some(eta) = self.eta_override {
            Normalization::from_eta(eta)?;
        }
        self.solver.validate()?;
        self.resolve_problems().map(|_| ())
    }

    /// Solver settings for one problem.
    pub fn solver_for(&self, p: &Problem) -> Result<SolverConfig> {
        self.solver.with_eta(self.eta_override.unwrap_or(p.eta_default()))
    }
}

/// Aggregated statistics of one (problem, algorithm) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub problem: String,
    pub algorithm: Algorithm,
    /// η used by GBBN; `0` means unit scaling. Empty for the other methods.
    pub eta: Option<f64>,
    pub runs: usize,
    pub mean_iter: f64,
    pub mean_time_ms: f64,
    pub mean_feval: f64,
    /// Mean accepted step over all iterations of all runs.
    pub mean_stepsize: f64,
    pub theta_small: usize,
    pub max_iter: usize,
    pub backtrack_fail: usize,
    /// FNV-1a hash of the start list, equal across algorithms.
    pub starts_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub sampler: &'static str,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

/// Runs `algorithm` from every start.
pub fn run_starts<P: VectorObjective + ?Sized>(
    algorithm: Algorithm,
    p: &P,
    starts: &[Vec<f64>],
    cfg: &SolverConfig,
    execution: Execution,
) -> Vec<RunRecord> {
    let one = |x0: &Vec<f64>| solve(algorithm, p, x0, cfg).unwrap_or_else(|e| failed_run(algorithm, x0, e));
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            starts.par_iter().map(one).collect()
        }
        _ => starts.iter().map(one).collect(),
    }
}

fn failed_run(algorithm: Algorithm, x0: &[f64], err: Error) -> RunRecord {
    RunRecord {
        algorithm,
        iterations: 0,
        fevals: 0,
        jevals: 0,
        accepted_steps: Vec::new(),
        theta_trace: vec![f64::NAN],
        x_final: x0.to_vec(),
        f_final: Vec::new(),
        terminated_by: Termination::BacktrackFail,
        failure: Some(err.to_string()),
        wall_time: Default::default(),
        trace: Vec::new(),
    }
}

/// Summary of a batch of runs that share a problem and algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunStats {
    pub runs: usize,
    pub mean_iter: f64,
    pub mean_time_ms: f64,
    pub mean_feval: f64,
    pub mean_stepsize: f64,
    pub theta_small: usize,
    pub max_iter: usize,
    pub backtrack_fail: usize,
}

impl RunStats {
    pub fn from_runs(runs: &[RunRecord]) -> Self {
        let n = runs.len().max(1) as f64;
        let mut steps = 0usize;
        let mut step_sum = 0.0;
        let mut s = RunStats {
            runs: runs.len(),
            mean_iter: 0.0,
            mean_time_ms: 0.0,
            mean_feval: 0.0,
            mean_stepsize: 0.0,
            theta_small: 0,
            max_iter: 0,
            backtrack_fail: 0,
        };
        for r in runs {
            s.mean_iter += r.iterations as f64;
            s.mean_feval += r.fevals as f64;
            s.mean_time_ms += r.wall_time.as_secs_f64() * 1e3;
            steps += r.accepted_steps.len();
            step_sum += r.accepted_steps.iter().sum::<f64>();
            match r.terminated_by {
                Termination::ThetaSmall => s.theta_small += 1,
                Termination::MaxIter => s.max_iter += 1,
                Termination::BacktrackFail => s.backtrack_fail += 1,
            }
        }
        s.mean_iter /= n;
        s.mean_feval /= n;
        s.mean_time_ms /= n;
        s.mean_stepsize = if steps == 0 { 0.0 } else { step_sum / steps as f64 };
        s
    }
}

/// FNV-1a over the bit patterns of every coordinate.
pub fn starts_hash(starts: &[Vec<f64>]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for x in starts {
        for v in x {
            for b in v.to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
    }
    h
}

/// Runs the sweep and writes `bench.csv` or `bench.json` when an output
/// directory is set.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for p in cfg.resolve_problems()? {
        let starts = sample_starts(&p, cfg.runs, cfg.seed);
        let hash = format!("{:016x}", starts_hash(&starts));
        let solver = cfg.solver_for(&p)?;
        for &alg in &cfg.algorithms {
            let runs = run_starts(alg, &p, &starts, &solver, cfg.execution);
            let s = RunStats::from_runs(&runs);
            rows.push(BenchRow {
                problem: p.name().to_string(),
                algorithm: alg,
                eta: (alg == Algorithm::Gbbn).then(|| solver.normalization.eta().unwrap_or(0.0)),
                runs: s.runs,
                mean_iter: s.mean_iter,
                mean_time_ms: s.mean_time_ms,
                mean_feval: s.mean_feval,
                mean_stepsize: s.mean_stepsize,
                theta_small: s.theta_small,
                max_iter: s.max_iter,
                backtrack_fail: s.backtrack_fail,
                starts_hash: hash.clone(),
            });
        }
    }
    let report = BenchReport {
        sampler: SAMPLER_VERSION,
        seed: cfg.seed,
        rows,
    };
    if let Some(dir) = &cfg.output_dir {
        let name = match cfg.format {
            Format::Csv => "bench.csv",
            Format::Json => "bench.json",
        };
        write_rows(&dir.join(name), &report.rows, cfg.format, || serde_json::to_string_pretty(&report))?;
    }
    Ok(report)
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn write_rows<T: Serialize>(
    path: &Path,
    rows: &[T],
    format: Format,
    json: impl FnOnce() -> serde_json::Result<String>,
) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
            for row in rows {
                w.serialize(row).map_err(|e| io_err(path, e))?;
            }
            w.flush().map_err(|e| io_err(path, e))
        }
        Format::Json => {
            let mut text = json().map_err(|e| io_err(path, e))?;
            text.push('\n');
            fs::write(path, text).map_err(|e| io_err(path, e))
        }
    }
}

/// Problem groups sharing a default η.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaGroup {
    Eta3,
    Eta40,
}

impl EtaGroup {
    pub fn default_eta(&self) -> f64 {
        match self {
            EtaGroup::Eta3 => 3.0,
            EtaGroup::Eta40 => 40.0,
        }
    }

    pub fn problems(&self) -> Vec<Problem> {
        let eta = self.default_eta();
        suite().into_iter().filter(|p| p.eta_default() == eta).collect()
    }
}

impl FromStr for EtaGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "eta3" => Ok(EtaGroup::Eta3),
            "eta40" => Ok(EtaGroup::Eta40),
            other => Err(Error::InvalidConfig(format!("unknown group `{other}`"))),
        }
    }
}

/// GBBN averages over a group for one η; group values are means of the
/// per-problem means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaRow {
    pub eta: f64,
    pub problems: usize,
    pub mean_iter: f64,
    pub mean_time_ms: f64,
    pub mean_feval: f64,
    pub mean_stepsize: f64,
    pub theta_small: usize,
    pub max_iter: usize,
    pub backtrack_fail: usize,
}

/// GBBN over every problem of `group` for each η in `etas`. `cfg.problems`,
/// `cfg.algorithms` and `cfg.eta_override` are ignored. Writes
/// `eta_sweep.csv` or `.json` when an output directory is set.
pub fn eta_sweep(group: EtaGroup, etas: &[f64], cfg: &BenchConfig) -> Result<Vec<EtaRow>> {
    if etas.is_empty() {
        return Err(Error::InvalidConfig("no eta values given".into()));
    }
    if cfg.runs == 0 {
        return Err(Error::InvalidConfig("runs must be at least 1".into()));
    }
    let problems = group.problems();
    let starts: Vec<Vec<Vec<f64>>> = problems.iter().map(|p| sample_starts(p, cfg.runs, cfg.seed)).collect();
    let mut rows = Vec::with_capacity(etas.len());
    for &eta in etas {
        let solver = cfg.solver.with_eta(eta)?;
        let k = problems.len() as f64;
        let mut row = EtaRow {
            eta,
            problems: problems.len(),
            mean_iter: 0.0,
            mean_time_ms: 0.0,
            mean_feval: 0.0,
            mean_stepsize: 0.0,
            theta_small: 0,
            max_iter: 0,
            backtrack_fail: 0,
        };
        for (p, xs) in problems.iter().zip(&starts) {
            let s = RunStats::from_runs(&run_starts(Algorithm::Gbbn, p, xs, &solver, cfg.execution));
            row.mean_iter += s.mean_iter / k;
            row.mean_time_ms += s.mean_time_ms / k;
            row.mean_feval += s.mean_feval / k;
            row.mean_stepsize += s.mean_stepsize / k;
            row.theta_small += s.theta_small;
            row.max_iter += s.max_iter;
            row.backtrack_fail += s.backtrack_fail;
        }
        rows.push(row);
    }
    if let Some(dir) = &cfg.output_dir {
        let name = match cfg.format {
            Format::Csv => "eta_sweep.csv",
            Format::Json => "eta_sweep.json",
        };
        write_rows(&dir.join(name), &rows, cfg.format, || serde_json::to_string_pretty(&rows))?;
    }
    Ok(rows)
}

/// Final points of a batch of runs, with a nondominance flag per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Front {
    pub f: Vec<Vec<f64>>,
    pub x: Vec<Vec<f64>>,
    pub nondominated: Vec<bool>,
}

/// Runs `algorithm` from `runs` seeded starts and writes
/// `run,f1..fm,x1..xn,nondominated` to `path`.
pub fn dump_front(p: &Problem, algorithm: Algorithm, cfg: &BenchConfig, path: &Path) -> Result<Front> {
    if cfg.runs == 0 {
        return Err(Error::InvalidConfig("runs must be at least 1".into()));
    }
    let solver = cfg.solver_for(p)?;
    let starts = sample_starts(p, cfg.runs, cfg.seed);
    let runs = run_starts(algorithm, p, &starts, &solver, cfg.execution);
    let f: Vec<Vec<f64>> = runs
        .iter()
        .map(|r| if r.f_final.is_empty() { vec![f64::NAN; p.m()] } else { r.f_final.clone() })
        .collect();
    let x: Vec<Vec<f64>> = runs.into_iter().map(|r| r.x_final).collect();
    let nondominated = nondominated_mask(&f);

    if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    let mut header = vec!["run".to_string()];
    header.extend((1..=p.m()).map(|i| format!("f{i}")));
    header.extend((1..=p.n()).map(|i| format!("x{i}")));
    header.push("nondominated".into());
    w.write_record(&header).map_err(|e| io_err(path, e))?;
    for (i, ((fi, xi), nd)) in f.iter().zip(&x).zip(&nondominated).enumerate() {
        let mut rec = vec![i.to_string()];
        rec.extend(fi.iter().chain(xi).map(|v| v.to_string()));
        rec.push(u8::from(*nd).to_string());
        w.write_record(&rec).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))?;
    Ok(Front { f, x, nondominated })
}
