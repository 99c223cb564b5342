//! Iterate loops for multiobjective steepest descent (SDMO), the global
//! Barzilai–Borwein method (GBB) and its gradient-normalized variant (GBBN).
//!
//! Every loop has the same shape: compute the common descent direction at
//! `x_k`, stop once `|θ_k| < eps`, otherwise pick an initial step, run a
//! backtracking search inside the box and move.
//!
//! * SDMO uses raw gradients, a unit initial step and the monotone Armijo test.
//! * GBB uses raw gradients, safeguarded BB initial steps and the max-type
//!   nonmonotone test.
//! * GBBN is GBB with each gradient divided by `‖∇fᵢ‖ + η`.
//!
//! For `k ≥ 1` the BB pair is `s = x_k − x_{k−1}` and `v = d_{k−1} − d_k`.
//! Since `−d` plays the role of the gradient, `v` is the usual gradient
//! difference and `⟨s, v⟩ > 0` on convex problems. At `k = 0` there is no
//! pair yet; by default a short probe along `d_0` supplies one (see
//! [`FirstStep`]).

mod audit;
mod bb;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize, Serializer};

use crate::direction::{compute_direction, steepest_direction, DirectionOutcome, Normalization};
use crate::error::{Error, Result};
use crate::linalg::{axpy, norm, sub, Matrix};
use crate::linesearch::{armijo_from, nonmonotone_search, LineSearchConfig, NonmonotoneMemory, StepOutcome};
use crate::problems::{Problem, VectorObjective};
use crate::simplex_qp::DualOptions;

pub use audit::{audit_run, AuditReport};
pub use bb::{bb_steps, clamp_initial_step, BbSteps};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sdmo,
    Gbb,
    Gbbn,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Sdmo, Algorithm::Gbb, Algorithm::Gbbn];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Sdmo => "sdmo",
            Algorithm::Gbb => "gbb",
            Algorithm::Gbbn => "gbbn",
        }
    }

    /// True for the methods that use BB steps and the nonmonotone search.
    pub fn is_nonmonotone(&self) -> bool {
        !matches!(self, Algorithm::Sdmo)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sdmo" => Ok(Algorithm::Sdmo),
            "gbb" | "bbmo" => Ok(Algorithm::Gbb),
            "gbbn" => Ok(Algorithm::Gbbn),
            other => Err(Error::InvalidConfig(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Initial step of the BB methods at `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FirstStep {
    /// `α₀ = 1`.
    Unit,
    /// Safeguarded BB step from a probe pair: `s = τ·d₀` with
    /// `‖s‖ = 1e-6·max(1, ‖x₀‖)` and `v` the change of `Σ wᵢ ∇fᵢ` over `s`,
    /// where `wᵢ = λᵢ / normalizerᵢ` are frozen at `x₀`. Costs one extra
    /// Jacobian and no objective evaluations.
    #[default]
    Secant,
}

const PROBE_SCALE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stop once `|θ| < eps`.
    pub eps: f64,
    pub max_iter: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Gradient scaling used by GBBN (ignored by SDMO and GBB).
    pub normalization: Normalization,
    pub ls: LineSearchConfig,
    #[serde(skip)]
    pub dual: DualOptions,
    pub first_step: FirstStep,
    /// Use `α = 1` as the initial step at every iteration (BB rule disabled).
    pub unit_steps: bool,
    /// Keep a per-iteration trace in the run record.
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps: 1e-8,
            max_iter: 500,
            alpha_min: 1e-3,
            alpha_max: 1e3,
            normalization: Normalization::Offset(1.0),
            ls: LineSearchConfig::default(),
            dual: DualOptions::default(),
            first_step: FirstStep::default(),
            unit_steps: false,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    /// Defaults with the problem's recommended η.
    pub fn for_problem(p: &Problem) -> Self {
        Self {
            normalization: Normalization::Offset(p.eta_default()),
            ..Self::default()
        }
    }

    /// Replaces the normalization; `η = 0` selects plain unit scaling.
    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.normalization = Normalization::from_eta(eta)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.ls.validate()?;
        if !(self.eps > 0.0) {
            return Err(Error::InvalidConfig(format!("eps must be positive, got {}", self.eps)));
        }
        if !(self.alpha_min > 0.0 && self.alpha_min < self.alpha_max) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < alpha_min < alpha_max, got {} and {}",
                self.alpha_min, self.alpha_max
            )));
        }
        if let Normalization::Offset(eta) = self.normalization {
            if !(eta > 0.0) {
                return Err(Error::InvalidConfig(format!("eta must be positive, got {eta}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ThetaSmall,
    MaxIter,
    BacktrackFail,
}

/// One accepted iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub d: Vec<f64>,
    pub theta: f64,
    /// Acceptance reference: `f(x_k)` for SDMO, `c_k` otherwise.
    pub reference: Vec<f64>,
    /// Initial trial step after the box cap.
    pub alpha_start: f64,
    pub step: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub iterations: usize,
    /// Objective-vector evaluations: one at `x₀` plus every line-search trial.
    pub fevals: usize,
    /// Jacobian evaluations, including secant probes.
    pub jevals: usize,
    /// Accepted step `t_k·α_k` of every iteration.
    pub accepted_steps: Vec<f64>,
    /// `θ` at every visited iterate, final one included.
    pub theta_trace: Vec<f64>,
    pub x_final: Vec<f64>,
    pub f_final: Vec<f64>,
    pub terminated_by: Termination,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(rename = "wall_time_ms", serialize_with = "duration_ms")]
    pub wall_time: Duration,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<IterationTrace>,
}

fn duration_ms<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl RunRecord {
    pub fn converged(&self) -> bool {
        self.terminated_by == Termination::ThetaSmall
    }

    pub fn final_theta(&self) -> f64 {
        *self.theta_trace.last().expect("theta trace is never empty")
    }
}

/// Runs `algorithm` on `p` from `x0`.
///
/// Fails only on invalid input: a bad config, a start outside the box, or a
/// non-finite value at `x0`. Problems during the iteration end the run with
/// [`Termination::BacktrackFail`].
pub fn solve<P: VectorObjective + ?Sized>(algorithm: Algorithm, p: &P, x0: &[f64], cfg: &SolverConfig) -> Result<RunRecord> {
    cfg.validate()?;
    if x0.len() != p.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: x0.len(),
        });
    }
    if !p.contains(x0, 0.0) {
        return Err(Error::InvalidConfig(format!("start point lies outside the box of {}", p.name())));
    }
    let started = Instant::now();
    let (f0, j0) = p.eval_pair(x0)?;
    let mode = match algorithm {
        Algorithm::Sdmo | Algorithm::Gbb => Normalization::None,
        Algorithm::Gbbn => cfg.normalization,
    };
    let mut state = RunState {
        p,
        algorithm,
        cfg,
        mode,
        x: x0.to_vec(),
        f: f0.clone(),
        j: j0,
        memory: NonmonotoneMemory::new(cfg.ls.memory, f0),
        prev: None,
        rec: RunRecord {
            algorithm,
            iterations: 0,
            fevals: 1,
            jevals: 1,
            accepted_steps: Vec::new(),
            theta_trace: Vec::new(),
            x_final: Vec::new(),
            f_final: Vec::new(),
            terminated_by: Termination::MaxIter,
            failure: None,
            wall_time: Duration::ZERO,
            trace: Vec::new(),
        },
    };
    state.run();
    let mut rec = state.rec;
    rec.x_final = state.x;
    rec.f_final = state.f;
    rec.wall_time = started.elapsed();
    Ok(rec)
}

pub fn solve_sdmo<P: VectorObjective + ?Sized>(p: &P, x0: &[f64], cfg: &SolverConfig) -> Result<RunRecord> {
    solve(Algorithm::Sdmo, p, x0, cfg)
}

pub fn solve_gbb<P: VectorObjective + ?Sized>(p: &P, x0: &[f64], cfg: &SolverConfig) -> Result<RunRecord> {
    solve(Algorithm::Gbb, p, x0, cfg)
}

pub fn solve_gbbn<P: VectorObjective + ?Sized>(p: &P, x0: &[f64], cfg: &SolverConfig) -> Result<RunRecord> {
    solve(Algorithm::Gbbn, p, x0, cfg)
}

/// `|θ(x)|` of the raw steepest-descent subproblem, independent of the
/// method that produced `x`.
pub fn pareto_critical_residual<P: VectorObjective + ?Sized>(p: &P, x: &[f64]) -> Result<f64> {
    let j = p.jacobian_checked(x)?;
    Ok(steepest_direction(&j)?.theta.abs())
}

struct RunState<'a, P: VectorObjective + ?Sized> {
    p: &'a P,
    algorithm: Algorithm,
    cfg: &'a SolverConfig,
    mode: Normalization,
    x: Vec<f64>,
    f: Vec<f64>,
    j: Matrix,
    memory: NonmonotoneMemory,
    /// `(x_{k-1}, d_{k-1})`
    prev: Option<(Vec<f64>, Vec<f64>)>,
    rec: RunRecord,
}

impl<P: VectorObjective + ?Sized> RunState<'_, P> {
    fn fail(&mut self, err: Error) {
        self.rec.terminated_by = Termination::BacktrackFail;
        self.rec.failure = Some(err.to_string());
    }

    fn run(&mut self) {
        loop {
            let dir = match compute_direction(&self.j, self.mode, &self.cfg.dual) {
                Ok(dir) => dir,
                // a vanishing gradient makes x critical
                Err(Error::ZeroGradient { .. }) => {
                    self.rec.theta_trace.push(0.0);
                    self.rec.terminated_by = Termination::ThetaSmall;
                    return;
                }
                Err(e) => {
                    self.rec.theta_trace.push(f64::NAN);
                    self.fail(e);
                    return;
                }
            };
            self.rec.theta_trace.push(dir.theta);
            if dir.theta.abs() < self.cfg.eps {
                self.rec.terminated_by = Termination::ThetaSmall;
                return;
            }
            if self.rec.iterations >= self.cfg.max_iter {
                self.rec.terminated_by = Termination::MaxIter;
                return;
            }

            let alpha0 = self.initial_step(&dir);
            let reference = match self.algorithm {
                Algorithm::Sdmo => self.f.clone(),
                _ => self.memory.reference(),
            };
            let searched = match self.algorithm {
                Algorithm::Sdmo => armijo_from(self.p, &self.x, &dir.d, &self.j, &self.f, alpha0, &self.cfg.ls),
                _ => nonmonotone_search(self.p, &self.x, &dir.d, &self.j, &mut self.memory, alpha0, &self.cfg.ls),
            };
            let out: StepOutcome = match searched {
                Ok(out) => out,
                Err(e) => {
                    if matches!(e, Error::BacktrackLimitExceeded { .. }) {
                        self.rec.fevals += self.cfg.ls.max_backtracks + 1;
                    }
                    self.fail(e);
                    return;
                }
            };
            self.rec.fevals += out.trials;
            let j_next = match self.p.jacobian_checked(&out.x) {
                Ok(j) => j,
                Err(e) => {
                    self.fail(e);
                    return;
                }
            };
            self.rec.jevals += 1;
            if self.cfg.record_trace {
                self.rec.trace.push(IterationTrace {
                    x: self.x.clone(),
                    f: self.f.clone(),
                    d: dir.d.clone(),
                    theta: dir.theta,
                    reference,
                    alpha_start: out.alpha_start,
                    step: out.step,
                    trials: out.trials,
                });
            }
            self.rec.accepted_steps.push(out.step);
            self.rec.iterations += 1;
            let x_prev = std::mem::replace(&mut self.x, out.x);
            self.prev = Some((x_prev, dir.d));
            self.f = out.f;
            self.j = j_next;
        }
    }

    fn initial_step(&mut self, dir: &DirectionOutcome) -> f64 {
        if self.algorithm == Algorithm::Sdmo || self.cfg.unit_steps {
            return 1.0;
        }
        let (s, v) = match &self.prev {
            Some((x_prev, d_prev)) => (sub(&self.x, x_prev), sub(d_prev, &dir.d)),
            None => match self.cfg.first_step {
                FirstStep::Unit => return 1.0,
                FirstStep::Secant => match self.probe_pair(dir) {
                    Some(pair) => pair,
                    None => return 1.0,
                },
            },
        };
        let bb = bb_steps(&s, &v);
        // nonpositive curvature: BB1 carries no step information, fall back to BB3
        let bb1 = bb.bb1.filter(|b| *b > 0.0);
        clamp_initial_step(bb1, bb.bb3, self.cfg.alpha_min, self.cfg.alpha_max)
    }

    fn probe_pair(&mut self, dir: &DirectionOutcome) -> Option<(Vec<f64>, Vec<f64>)> {
        let dn = norm(&dir.d);
        if dn == 0.0 {
            return None;
        }
        let tau = PROBE_SCALE * norm(&self.x).max(1.0) / dn;
        let s: Vec<f64> = dir.d.iter().map(|v| tau * v).collect();
        let jp = self.p.jacobian_checked(&axpy(&self.x, 1.0, &s)).ok()?;
        self.rec.jevals += 1;
        let w: Vec<f64> = dir
            .weights
            .as_slice()
            .iter()
            .zip(&dir.normalizers)
            .map(|(l, m)| l / m)
            .collect();
        let v = sub(&jp.combine_rows(&w), &self.j.combine_rows(&w));
        Some((s, v))
    }
}
