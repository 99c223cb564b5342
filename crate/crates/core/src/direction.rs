//! Common descent directions from the dual of the min-max subproblem.
//!
//! Given gradients `gᵢ` (possibly rescaled), the direction is
//! `d = −Σ λᵢ gᵢ` with `λ` minimizing `½‖Σ λᵢ gᵢ‖²` over the simplex, and the
//! optimal value of the primal subproblem is `θ = −½‖d‖²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, norm_sq, Matrix};
use crate::simplex_qp::{solve_dual_matrix, DualOptions, SimplexWeights};

/// How gradient rows are rescaled before the dual solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "eta")]
pub enum Normalization {
    /// Raw gradients (steepest descent).
    None,
    /// `gᵢ / (‖gᵢ‖ + η)` with `η > 0`.
    Offset(f64),
    /// `gᵢ / ‖gᵢ‖`; undefined for a vanishing gradient.
    Unit,
}

impl Normalization {
    /// `η = 0` selects [`Normalization::Unit`]; positive values select the offset form.
    pub fn from_eta(eta: f64) -> Result<Self> {
        if eta == 0.0 {
            Ok(Self::Unit)
        } else if eta > 0.0 && eta.is_finite() {
            Ok(Self::Offset(eta))
        } else {
            Err(Error::InvalidConfig(format!("eta must be >= 0, got {eta}")))
        }
    }

    /// The η this mode corresponds to (`0` for unit, `None` for raw).
    pub fn eta(&self) -> Option<f64> {
        match *self {
            Self::None => None,
            Self::Offset(e) => Some(e),
            Self::Unit => Some(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionOutcome {
    pub d: Vec<f64>,
    pub theta: f64,
    pub weights: SimplexWeights,
    /// Divisor applied to each gradient row (all ones without normalization).
    pub normalizers: Vec<f64>,
    /// Rows whose constraint `⟨ĝᵢ, d⟩ ≤ −‖d‖²` is tight within `1e-9·(1+‖d‖²)`.
    pub active_set: Vec<usize>,
    /// Rows actually fed to the dual (`ĝᵢ = ∇fᵢ / normalizerᵢ`).
    pub scaled: Matrix,
}

/// Divides row `i` of `j` by `‖row i‖ + eta`.
pub fn normalize_gradients(j: &Matrix, eta: f64) -> Result<(Matrix, Vec<f64>)> {
    if !(eta > 0.0) {
        return Err(Error::InvalidConfig(format!("eta must be positive, got {eta}")));
    }
    Ok(scale_rows(j, |r| norm(r) + eta))
}

fn unit_normalize(j: &Matrix) -> Result<(Matrix, Vec<f64>)> {
    for (i, r) in j.iter_rows().enumerate() {
        if norm(r) == 0.0 {
            return Err(Error::ZeroGradient { index: i });
        }
    }
    Ok(scale_rows(j, norm))
}

fn scale_rows(j: &Matrix, divisor: impl Fn(&[f64]) -> f64) -> (Matrix, Vec<f64>) {
    let mut out = j.clone();
    let mut norms = Vec::with_capacity(j.rows());
    for i in 0..j.rows() {
        let s = divisor(j.row(i));
        for v in out.row_mut(i) {
            *v /= s;
        }
        norms.push(s);
    }
    (out, norms)
}

/// Direction for the given normalization mode.
pub fn compute_direction(j: &Matrix, mode: Normalization, dual: &DualOptions) -> Result<DirectionOutcome> {
    let (scaled, normalizers) = match mode {
        Normalization::None => (j.clone(), vec![1.0; j.rows()]),
        Normalization::Offset(eta) => normalize_gradients(j, eta)?,
        Normalization::Unit => unit_normalize(j)?,
    };
    let res = solve_dual_matrix(&scaled, dual)?;
    let d: Vec<f64> = res.combined.iter().map(|v| -v).collect();
    let dd = norm_sq(&d);
    let theta = -0.5 * dd;
    let atol = 1e-9 * (1.0 + dd);
    let active_set = scaled
        .iter_rows()
        .enumerate()
        .filter(|(_, g)| (dot(g, &d) + dd).abs() <= atol)
        .map(|(i, _)| i)
        .collect();
    Ok(DirectionOutcome {
        d,
        theta,
        weights: res.weights,
        normalizers,
        active_set,
        scaled,
    })
}

/// Steepest common descent direction from raw gradients.
pub fn steepest_direction(j: &Matrix) -> Result<DirectionOutcome> {
    compute_direction(j, Normalization::None, &DualOptions::default())
}

/// Direction from gradients rescaled by `‖∇fᵢ‖ + η`.
pub fn normalized_direction(j: &Matrix, eta: f64) -> Result<DirectionOutcome> {
    compute_direction(j, Normalization::Offset(eta), &DualOptions::default())
}

/// `|θ| < eps`.
pub fn is_pareto_critical(outcome: &DirectionOutcome, eps: f64) -> bool {
    outcome.theta.abs() < eps
}
