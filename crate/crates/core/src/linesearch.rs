//! Backtracking line searches for vector objectives.
//!
//! Both searches start from a step capped so the trial point stays in the
//! box, then shrink by `delta` until every objective satisfies its sufficient
//! decrease test. The monotone test compares against `f(x)`; the max-type
//! nonmonotone test compares against `c_k`, the componentwise maximum of the
//! last `m(k) + 1` accepted objective vectors. A trial point where any
//! objective is NaN or infinite counts as a failed test.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{all_finite, axpy, Matrix};
use crate::problems::VectorObjective;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSearchConfig {
    /// Sufficient decrease constant σ ∈ (0, 1).
    pub sigma: f64,
    /// Backtracking factor δ ∈ (0, 1).
    pub delta: f64,
    /// Memory length M ≥ 1 of the nonmonotone reference.
    pub memory: usize,
    pub max_backtracks: usize,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        Self {
            sigma: 1e-4,
            delta: 0.5,
            memory: 4,
            max_backtracks: 60,
        }
    }
}

impl LineSearchConfig {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.sigma) || !open_unit(self.delta) {
            return Err(Error::InvalidConfig(format!(
                "sigma and delta must lie in (0, 1), got {} and {}",
                self.sigma, self.delta
            )));
        }
        if self.memory == 0 || self.max_backtracks == 0 {
            return Err(Error::InvalidConfig("memory and max_backtracks must be >= 1".into()));
        }
        Ok(())
    }
}

/// Sliding window of accepted objective vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct NonmonotoneMemory {
    capacity: usize,
    // newest first: window[j] = f(x_{k-j})
    window: VecDeque<Vec<f64>>,
    k: usize,
    mk: usize,
}

impl NonmonotoneMemory {
    /// Starts at `k = 0`, `m(0) = 0`, window `[f(x_0)]`.
    pub fn new(capacity: usize, f0: Vec<f64>) -> Self {
        assert!(capacity >= 1, "memory length must be positive");
        let mut window = VecDeque::with_capacity(capacity);
        window.push_front(f0);
        Self {
            capacity,
            window,
            k: 0,
            mk: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Current `m(k)`.
    pub fn mk(&self) -> usize {
        self.mk
    }

    /// `c_k`: componentwise maximum over `f(x_{k-j})`, `0 ≤ j ≤ m(k)`.
    pub fn reference(&self) -> Vec<f64> {
        let mut c = self.window[0].clone();
        for f in self.window.iter().skip(1) {
            for (ci, fi) in c.iter_mut().zip(f) {
                *ci = ci.max(*fi);
            }
        }
        c
    }

    /// Records the next accepted objective vector and advances `k`.
    pub fn push(&mut self, f: Vec<f64>) {
        self.k += 1;
        self.mk = (self.mk + 1).min(self.capacity - 1);
        self.window.push_front(f);
        self.window.truncate(self.mk + 1);
    }
}

/// Result of an accepted line search.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    /// First trial step, after the box cap.
    pub alpha_start: f64,
    /// Accepted step; the new point is `x + step·d` (clamped to the box).
    pub step: f64,
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    /// Objective evaluations spent, including the accepted one.
    pub trials: usize,
}

impl StepOutcome {
    /// `t = step / alpha_start = δ^l`, with `l` the number of reductions.
    pub fn backtrack_factor(&self) -> f64 {
        self.step / self.alpha_start
    }
}

/// Largest `β ≤ alpha0` keeping `lower ≤ x + βd ≤ upper`.
///
/// Coordinates with `d_j = 0` never bind; returns 0 when `x` sits on a face
/// that `d` points out of.
pub fn cap_to_box(x: &[f64], d: &[f64], alpha0: f64, lower: &[f64], upper: &[f64]) -> f64 {
    let mut beta = f64::INFINITY;
    for j in 0..x.len() {
        let b = if d[j] > 0.0 {
            (upper[j] - x[j]) / d[j]
        } else if d[j] < 0.0 {
            (lower[j] - x[j]) / d[j]
        } else {
            continue;
        };
        beta = beta.min(b);
    }
    alpha0.min(beta.max(0.0))
}

/// `f_trial ≤ reference + σ·alpha·Jd` for every component; false on NaN/∞.
pub fn nonmonotone_accept(f_trial: &[f64], reference: &[f64], alpha: f64, jd: &[f64], sigma: f64) -> bool {
    all_finite(f_trial)
        && f_trial
            .iter()
            .zip(reference)
            .zip(jd)
            .all(|((f, c), g)| *f <= c + sigma * alpha * g)
}

fn clamp_into(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, lo), hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(*lo, *hi);
    }
}

fn backtrack<P: VectorObjective + ?Sized>(
    p: &P,
    x: &[f64],
    d: &[f64],
    jd: &[f64],
    reference: &[f64],
    alpha0: f64,
    cfg: &LineSearchConfig,
) -> Result<StepOutcome> {
    let alpha_start = cap_to_box(x, d, alpha0, p.lower(), p.upper());
    if !(alpha_start > 0.0) {
        return Err(Error::NoFeasibleStep);
    }
    let mut alpha = alpha_start;
    let mut trials = 0;
    loop {
        trials += 1;
        let mut xt = axpy(x, alpha, d);
        clamp_into(&mut xt, p.lower(), p.upper());
        let ft = p.evaluate(&xt);
        if nonmonotone_accept(&ft, reference, alpha, jd, cfg.sigma) {
            return Ok(StepOutcome {
                alpha_start,
                step: alpha,
                x: xt,
                f: ft,
                trials,
            });
        }
        if trials > cfg.max_backtracks {
            return Err(Error::BacktrackLimitExceeded {
                limit: cfg.max_backtracks,
            });
        }
        alpha *= cfg.delta;
    }
}

/// Monotone Armijo search from a unit step.
pub fn armijo<P: VectorObjective + ?Sized>(p: &P, x: &[f64], d: &[f64], j: &Matrix, f_x: &[f64], cfg: &LineSearchConfig) -> Result<StepOutcome> {
    armijo_from(p, x, d, j, f_x, 1.0, cfg)
}

/// Monotone Armijo search from `alpha0`.
pub fn armijo_from<P: VectorObjective + ?Sized>(
    p: &P,
    x: &[f64],
    d: &[f64],
    j: &Matrix,
    f_x: &[f64],
    alpha0: f64,
    cfg: &LineSearchConfig,
) -> Result<StepOutcome> {
    backtrack(p, x, d, &j.mul_vec(d), f_x, alpha0, cfg)
}

/// Max-type nonmonotone search from `alpha0`; pushes the accepted objective
/// vector into `memory`.
pub fn nonmonotone_search<P: VectorObjective + ?Sized>(
    p: &P,
    x: &[f64],
    d: &[f64],
    j: &Matrix,
    memory: &mut NonmonotoneMemory,
    alpha0: f64,
    cfg: &LineSearchConfig,
) -> Result<StepOutcome> {
    let reference = memory.reference();
    let out = backtrack(p, x, d, &j.mul_vec(d), &reference, alpha0, cfg)?;
    memory.push(out.f.clone());
    Ok(out)
}
