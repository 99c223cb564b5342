use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use gbbn::bench::{dump_front, eta_sweep, run_bench, BenchConfig, EtaGroup, Execution, Format};
use gbbn::problems::{by_name, check_gradients, suite, VectorObjective};
use gbbn::sampling::sample_starts;
use gbbn::solvers::{solve, Algorithm, SolverConfig};

#[derive(Parser)]
#[command(name = "gbbn", version)]
#[command(about = "Multiobjective descent with normalized Barzilai-Borwein steps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the benchmark problems.
    ListProblems,
    /// Run one solver from one start point and print the run record as JSON.
    Solve {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value = "gbbn")]
        algo: Algorithm,
        /// Normalization constant; 0 selects plain unit scaling.
        #[arg(long)]
        eta: Option<f64>,
        /// Seed for the start point when --x0 is absent.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated start point.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        /// Include the per-iteration trace.
        #[arg(long)]
        trace: bool,
    },
    /// Run every algorithm on every problem from shared seeded starts.
    Bench {
        /// Comma-separated problem names (default: all).
        #[arg(long, value_delimiter = ',')]
        problems: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "sdmo,gbb,gbbn")]
        algos: Vec<Algorithm>,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace each problem's default η.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Average GBBN over a problem group for several η values.
    EtaSweep {
        #[arg(long)]
        group: EtaGroup,
        #[arg(long, value_delimiter = ',', required = true)]
        etas: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long)]
        sequential: bool,
    },
    /// Write final objective values and points of many runs as CSV.
    Front {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value = "gbbn")]
        algo: Algorithm,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare analytic Jacobians with central differences.
    CheckGradients {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::ListProblems => {
            println!("{:<11} {:>4} {:>3} {:>7} {:>7} {:>5}  reference", "name", "n", "m", "lower", "upper", "eta");
            for p in suite() {
                println!(
                    "{:<11} {:>4} {:>3} {:>7} {:>7} {:>5}  {}",
                    p.name(),
                    p.n(),
                    p.m(),
                    p.lower()[0],
                    p.upper()[0],
                    p.eta_default(),
                    p.reference()
                );
            }
        }
        Command::Solve {
            problem,
            algo,
            eta,
            seed,
            x0,
            trace,
        } => {
            let p = by_name(&problem)?;
            let x0 = match x0 {
                Some(x) => x,
                None => sample_starts(&p, 1, seed).remove(0),
            };
            let mut cfg = SolverConfig::for_problem(&p);
            if let Some(eta) = eta {
                cfg = cfg.with_eta(eta)?;
            }
            cfg.record_trace = trace;
            let run = solve(algo, &p, &x0, &cfg)?;
            println!("{}", serde_json::to_string_pretty(&run)?);
        }
        Command::Bench {
            problems,
            algos,
            runs,
            seed,
            eta,
            out,
            format,
            sequential,
        } => {
            let cfg = BenchConfig {
                problems,
                algorithms: algos,
                runs,
                seed,
                eta_override: eta,
                output_dir: Some(out.clone()),
                format,
                execution: execution(sequential),
                ..Default::default()
            };
            let report = run_bench(&cfg)?;
            for r in &report.rows {
                println!(
                    "{:<11} {:<5} iter {:>8.2}  feval {:>8.2}  stepsize {:>9.3}  failed {}",
                    r.problem,
                    r.algorithm,
                    r.mean_iter,
                    r.mean_feval,
                    r.mean_stepsize,
                    r.max_iter + r.backtrack_fail
                );
            }
            eprintln!("wrote report to {}", out.display());
        }
        Command::EtaSweep {
            group,
            etas,
            runs,
            seed,
            out,
            format,
            sequential,
        } => {
            let cfg = BenchConfig {
                runs,
                seed,
                output_dir: Some(out.clone()),
                format,
                execution: execution(sequential),
                ..Default::default()
            };
            for r in eta_sweep(group, &etas, &cfg)? {
                println!(
                    "eta {:>6}  iter {:>7.2}  time {:>7.3}  stepsize {:>9.3}  feval {:>8.2}",
                    r.eta, r.mean_iter, r.mean_time_ms, r.mean_stepsize, r.mean_feval
                );
            }
            eprintln!("wrote sweep to {}", out.display());
        }
        Command::Front {
            problem,
            algo,
            runs,
            seed,
            eta,
            out,
        } => {
            let p = by_name(&problem)?;
            let cfg = BenchConfig {
                runs,
                seed,
                eta_override: eta,
                ..Default::default()
            };
            let front = dump_front(&p, algo, &cfg, &out)?;
            let kept = front.nondominated.iter().filter(|b| **b).count();
            eprintln!("wrote {} rows ({kept} nondominated) to {}", front.f.len(), out.display());
        }
        Command::CheckGradients { trials, seed, tol } => {
            let mut failed = Vec::new();
            for p in suite() {
                let err = check_gradients(&p, trials, seed).with_context(|| format!("checking {}", p.name()))?;
                let ok = err <= tol;
                println!("{:<11} {:.3e} {}", p.name(), err, if ok { "ok" } else { "FAIL" });
                if !ok {
                    failed.push(p.name().to_string());
                }
            }
            if !failed.is_empty() {
                bail!("gradient check failed for {}", failed.join(", "));
            }
        }
    }
    Ok(())
}
