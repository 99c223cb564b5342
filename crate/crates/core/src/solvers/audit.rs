//! Post-hoc check of a traced run, recomputed from the problem alone.

use serde::Serialize;

use super::{Algorithm, RunRecord, SolverConfig};
use crate::error::{Error, Result};
use crate::problems::VectorObjective;

const BOX_SLACK: f64 = 1e-12;

/// Violation counts; all zero for a sound run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub steps: usize,
    /// Accepted steps failing Armijo (SDMO) or the max-type condition.
    pub acceptance: usize,
    /// Iterations where `c_{k+1} ≰ c_k` componentwise.
    pub reference_increase: usize,
    /// Recorded reference differing from the recomputed one.
    pub reference_mismatch: usize,
    /// Iterates outside the box.
    pub out_of_box: usize,
    /// Recorded objective values differing from a fresh evaluation.
    pub value_mismatch: usize,
}

impl AuditReport {
    pub fn violations(&self) -> usize {
        self.acceptance + self.reference_increase + self.reference_mismatch + self.out_of_box + self.value_mismatch
    }

    pub fn merge(&mut self, other: &AuditReport) {
        self.steps += other.steps;
        self.acceptance += other.acceptance;
        self.reference_increase += other.reference_increase;
        self.reference_mismatch += other.reference_mismatch;
        self.out_of_box += other.out_of_box;
        self.value_mismatch += other.value_mismatch;
    }
}

/// Audits `run`, which must have been produced with `record_trace` set.
pub fn audit_run<P: VectorObjective + ?Sized>(p: &P, run: &RunRecord, cfg: &SolverConfig) -> Result<AuditReport> {
    if run.trace.len() != run.iterations {
        return Err(Error::InvalidConfig("run was recorded without a trace".into()));
    }
    let mut report = AuditReport {
        steps: run.iterations,
        ..Default::default()
    };

    // iterate values f(x_0), ..., f(x_K)
    let mut xs: Vec<&[f64]> = run.trace.iter().map(|t| t.x.as_slice()).collect();
    xs.push(&run.x_final);
    let mut fs = Vec::with_capacity(xs.len());
    let recorded = run.trace.iter().map(|t| &t.f).chain(std::iter::once(&run.f_final));
    for (x, f_rec) in xs.iter().zip(recorded) {
        if !p.contains(x, BOX_SLACK) {
            report.out_of_box += 1;
        }
        let f = p.evaluate(x);
        if &f != f_rec {
            report.value_mismatch += 1;
        }
        fs.push(f);
    }

    let memory = cfg.ls.memory;
    let mut mk = 0usize;
    let mut prev_ref: Option<Vec<f64>> = None;
    for (k, step) in run.trace.iter().enumerate() {
        if k > 0 {
            mk = (mk + 1).min(memory - 1);
        }
        let reference = match run.algorithm {
            Algorithm::Sdmo => fs[k].clone(),
            _ => window_max(&fs[k - mk..=k]),
        };
        if reference != step.reference {
            report.reference_mismatch += 1;
        }
        if run.algorithm.is_nonmonotone() {
            if let Some(prev) = &prev_ref {
                if reference.iter().zip(prev).any(|(c, c_prev)| c > c_prev) {
                    report.reference_increase += 1;
                }
            }
        }
        let j = p.jacobian(&step.x);
        let jd = j.mul_vec(&step.d);
        let f_next = &fs[k + 1];
        let ok = f_next
            .iter()
            .zip(&reference)
            .zip(&jd)
            .all(|((f, c), g)| f.is_finite() && *f <= c + cfg.ls.sigma * step.step * g);
        if !ok {
            report.acceptance += 1;
        }
        prev_ref = Some(reference);
    }
    Ok(report)
}

fn window_max(window: &[Vec<f64>]) -> Vec<f64> {
    let mut c = window[0].clone();
    for f in &window[1..] {
        for (ci, fi) in c.iter_mut().zip(f) {
            *ci = ci.max(*fi);
        }
    }
    c
}
