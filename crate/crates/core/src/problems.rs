//! Box-constrained multiobjective test problems with hand-derived gradients.
//!
//! The suite holds 21 instances. Scalar bounds are broadcast across every
//! coordinate, and each instance carries the normalization constant η it is
//! benchmarked with.

use std::f64::consts::{PI, SQRT_2};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{all_finite, Matrix};
use crate::sampling::{stream_rng, uniform_point};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    Imbalance { a: f64, b: f64, c: f64, d: f64 },
    Jos1,
    Wit { lambda: f64 },
    Deb,
    Pnr,
    Dd1,
    Tridia1,
    Tridia2,
    Ltdz,
    Hil,
    Sd,
}

/// A vector objective `f: Rⁿ → Rᵐ` with its Jacobian and a box.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    name: &'static str,
    n: usize,
    m: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    eta_default: f64,
    reference: &'static str,
    suite_index: Option<usize>,
    family: Family,
}

const HIL_AC: f64 = 45.0;
const HIL_A1: f64 = 40.0;
const HIL_A2: f64 = 25.0;
const HIL_D: f64 = 0.5;

// SD constants L, F, E.
const SD_L: f64 = 1.0;
const SD_F: f64 = 1.0;
const SD_E: f64 = 1.0;

impl Problem {
    fn new(
        name: &'static str,
        n: usize,
        m: usize,
        bounds: (f64, f64),
        eta_default: f64,
        reference: &'static str,
        family: Family,
    ) -> Self {
        Self {
            name,
            n,
            m,
            lower: vec![bounds.0; n],
            upper: vec![bounds.1; n],
            eta_default,
            reference,
            suite_index: None,
            family,
        }
    }

    pub fn eta_default(&self) -> f64 {
        self.eta_default
    }

    pub fn reference(&self) -> &str {
        self.reference
    }

    pub fn suite_index(&self) -> Option<usize> {
        self.suite_index
    }

    /// Random stream used when sampling start points for this problem.
    pub fn stream_id(&self) -> u64 {
        match self.suite_index {
            Some(i) => i as u64,
            // FNV-1a of the name, kept clear of the suite range
            None => {
                let h = self.name.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| {
                    (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
                });
                h | (1 << 63)
            }
        }
    }

    /// True when `x` is within `margin` of a point where the objectives blow up.
    pub fn near_singular(&self, x: &[f64], margin: f64) -> bool {
        match self.family {
            Family::Sd => x.iter().any(|v| v.abs() < margin),
            Family::Deb => x[0].abs() < margin,
            _ => false,
        }
    }

    /// Objective vector. Panics if `x.len() != n`.
    fn eval_raw(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "{}: wrong dimension", self.name);
        match self.family {
            Family::Imbalance { a, b, c, d } => vec![
                a * x[0] * x[0] + b * x[1] * x[1],
                c * (x[0] - 50.0).powi(2) + d * (x[1] + 50.0).powi(2),
            ],
            Family::Jos1 => {
                let n = self.n as f64;
                let f1 = x.iter().map(|v| v * v).sum::<f64>() / n;
                let f2 = x.iter().map(|v| (v - 2.0).powi(2)).sum::<f64>() / n;
                vec![f1, f2]
            }
            Family::Wit { lambda } => {
                let (u, v) = (x[0] - 2.0, x[1] - 2.0);
                let f1 = lambda * (u * u + v * v) + (1.0 - lambda) * (u.powi(4) + v.powi(8));
                let f2 = (x[0] + 2.0 * lambda).powi(2) + (x[1] + 2.0 * lambda).powi(2);
                vec![f1, f2]
            }
            Family::Deb => vec![x[0], deb_g(x[1]) / x[0]],
            Family::Pnr => {
                let (a, b) = (x[0], x[1]);
                vec![
                    a.powi(4) + b.powi(4) - a * a + b * b - 10.0 * a * b + 0.25 * a + 20.0,
                    (a - 1.0).powi(2) + b * b,
                ]
            }
            Family::Dd1 => vec![
                x.iter().map(|v| v * v).sum(),
                3.0 * x[0] + 2.0 * x[1] - x[2] / 3.0 + 0.01 * (x[3] - x[4]).powi(3),
            ],
            Family::Tridia1 => vec![
                (2.0 * x[0] - 1.0).powi(2),
                2.0 * (2.0 * x[0] - x[1]).powi(2),
                3.0 * (x[1] - x[2]).powi(2),
            ],
            Family::Tridia2 => {
                let mid = |i: usize| {
                    // objective i (1-based) couples x_{i-1} and x_i
                    let fi = i as f64;
                    let (p, q) = (x[i - 2], x[i - 1]);
                    fi * (2.0 * p - q).powi(2) - (fi - 1.0) * p * p + fi * q * q
                };
                vec![
                    (2.0 * x[0] - 1.0).powi(2) + x[1] * x[1],
                    mid(2),
                    mid(3),
                    4.0 * (2.0 * x[2] - x[3]).powi(2) - 3.0 * x[2] * x[2],
                ]
            }
            Family::Ltdz => {
                let (a, b) = (0.5 * PI * x[0], 0.5 * PI * x[1]);
                let r = 1.0 + x[2];
                vec![
                    3.0 - r * a.cos() * b.cos(),
                    3.0 - r * a.cos() * b.sin(),
                    3.0 - r * a.cos() * a.sin(),
                ]
            }
            Family::Hil => {
                let (a, b) = hil_ab(x);
                vec![b * a.cos(), b * a.sin()]
            }
            Family::Sd => {
                let f1 = SD_L * (2.0 * x[0] + SQRT_2 * x[1] + SQRT_2 * x[2] + x[3]);
                let f2 = SD_F * SD_L / SD_E
                    * (2.0 / x[0] + 2.0 * SQRT_2 / x[1] + 2.0 * SQRT_2 / x[2] + 2.0 / x[3]);
                vec![f1, f2]
            }
        }
    }

    /// Jacobian `m x n`; row `i` is `∇fᵢ(x)`. Panics if `x.len() != n`.
    fn jacobian_raw(&self, x: &[f64]) -> Matrix {
        assert_eq!(x.len(), self.n, "{}: wrong dimension", self.name);
        let mut j = Matrix::zeros(self.m, self.n);
        match self.family {
            Family::Imbalance { a, b, c, d } => {
                j.row_mut(0).copy_from_slice(&[2.0 * a * x[0], 2.0 * b * x[1]]);
                j.row_mut(1)
                    .copy_from_slice(&[2.0 * c * (x[0] - 50.0), 2.0 * d * (x[1] + 50.0)]);
            }
            Family::Jos1 => {
                let s = 2.0 / self.n as f64;
                for (g, v) in j.row_mut(0).iter_mut().zip(x) {
                    *g = s * v;
                }
                for (g, v) in j.row_mut(1).iter_mut().zip(x) {
                    *g = s * (v - 2.0);
                }
            }
            Family::Wit { lambda } => {
                let (u, v) = (x[0] - 2.0, x[1] - 2.0);
                j.row_mut(0).copy_from_slice(&[
                    2.0 * lambda * u + 4.0 * (1.0 - lambda) * u.powi(3),
                    2.0 * lambda * v + 8.0 * (1.0 - lambda) * v.powi(7),
                ]);
                j.row_mut(1).copy_from_slice(&[
                    2.0 * (x[0] + 2.0 * lambda),
                    2.0 * (x[1] + 2.0 * lambda),
                ]);
            }
            Family::Deb => {
                let g = deb_g(x[1]);
                j.row_mut(0).copy_from_slice(&[1.0, 0.0]);
                j.row_mut(1)
                    .copy_from_slice(&[-g / (x[0] * x[0]), deb_g_prime(x[1]) / x[0]]);
            }
            Family::Pnr => {
                let (a, b) = (x[0], x[1]);
                j.row_mut(0).copy_from_slice(&[
                    4.0 * a.powi(3) - 2.0 * a - 10.0 * b + 0.25,
                    4.0 * b.powi(3) + 2.0 * b - 10.0 * a,
                ]);
                j.row_mut(1).copy_from_slice(&[2.0 * (a - 1.0), 2.0 * b]);
            }
            Family::Dd1 => {
                for (g, v) in j.row_mut(0).iter_mut().zip(x) {
                    *g = 2.0 * v;
                }
                let c = 0.03 * (x[3] - x[4]).powi(2);
                j.row_mut(1).copy_from_slice(&[3.0, 2.0, -1.0 / 3.0, c, -c]);
            }
            Family::Tridia1 => {
                let u = 2.0 * x[0] - x[1];
                j.row_mut(0)[0] = 4.0 * (2.0 * x[0] - 1.0);
                j.row_mut(1)[0] = 8.0 * u;
                j.row_mut(1)[1] = -4.0 * u;
                j.row_mut(2)[1] = 6.0 * (x[1] - x[2]);
                j.row_mut(2)[2] = -6.0 * (x[1] - x[2]);
            }
            Family::Tridia2 => {
                j.row_mut(0)[0] = 4.0 * (2.0 * x[0] - 1.0);
                j.row_mut(0)[1] = 2.0 * x[1];
                for i in 2..=3usize {
                    let fi = i as f64;
                    let (p, q) = (x[i - 2], x[i - 1]);
                    let u = 2.0 * p - q;
                    let row = j.row_mut(i - 1);
                    row[i - 2] = 4.0 * fi * u - 2.0 * (fi - 1.0) * p;
                    row[i - 1] = -2.0 * fi * u + 2.0 * fi * q;
                }
                let u = 2.0 * x[2] - x[3];
                j.row_mut(3)[2] = 16.0 * u - 6.0 * x[2];
                j.row_mut(3)[3] = -8.0 * u;
            }
            Family::Ltdz => {
                let (a, b) = (0.5 * PI * x[0], 0.5 * PI * x[1]);
                let r = 1.0 + x[2];
                let h = 0.5 * PI;
                let (ca, sa, cb, sb) = (a.cos(), a.sin(), b.cos(), b.sin());
                j.row_mut(0)
                    .copy_from_slice(&[r * h * sa * cb, r * h * ca * sb, -ca * cb]);
                j.row_mut(1)
                    .copy_from_slice(&[r * h * sa * sb, -r * h * ca * cb, -ca * sb]);
                j.row_mut(2)
                    .copy_from_slice(&[-r * h * (2.0 * a).cos(), 0.0, -ca * sa]);
            }
            Family::Hil => {
                let (a, b) = hil_ab(x);
                let tau = 2.0 * PI;
                let deg = tau / 360.0;
                let da = [
                    deg * HIL_A1 * tau * (tau * x[0]).cos(),
                    deg * HIL_A2 * tau * (tau * x[1]).cos(),
                ];
                let db = [-HIL_D * tau * (tau * x[0]).sin(), 0.0];
                let (ca, sa) = (a.cos(), a.sin());
                for k in 0..2 {
                    j.row_mut(0)[k] = db[k] * ca - b * sa * da[k];
                    j.row_mut(1)[k] = db[k] * sa + b * ca * da[k];
                }
            }
            Family::Sd => {
                j.row_mut(0)
                    .copy_from_slice(&[2.0 * SD_L, SQRT_2 * SD_L, SQRT_2 * SD_L, SD_L]);
                let s = SD_F * SD_L / SD_E;
                let c = [2.0, 2.0 * SQRT_2, 2.0 * SQRT_2, 2.0];
                for (k, g) in j.row_mut(1).iter_mut().enumerate() {
                    *g = -s * c[k] / (x[k] * x[k]);
                }
            }
        }
        j
    }
}

/// A box-constrained vector objective `f: Rⁿ → Rᵐ` with an analytic Jacobian.
///
/// Implementations must be pure; solvers call them from many threads.
pub trait VectorObjective: Sync {
    fn name(&self) -> &str;
    fn n(&self) -> usize;
    fn m(&self) -> usize;
    fn lower(&self) -> &[f64];
    fn upper(&self) -> &[f64];

    /// Objective vector. May panic if `x.len() != n`.
    fn evaluate(&self, x: &[f64]) -> Vec<f64>;

    /// Jacobian `m x n`; row `i` is `∇fᵢ(x)`. May panic if `x.len() != n`.
    fn jacobian(&self, x: &[f64]) -> Matrix;

    /// True when `x` lies in the box, allowing `slack` outside each face.
    fn contains(&self, x: &[f64], slack: f64) -> bool {
        x.len() == self.n()
            && x.iter()
                .zip(self.lower().iter().zip(self.upper()))
                .all(|(&v, (&lo, &hi))| v >= lo - slack && v <= hi + slack)
    }

    /// Objective vector, failing on wrong length or non-finite output.
    fn eval_checked(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n(), x)?;
        let f = self.evaluate(x);
        if !all_finite(&f) {
            return Err(non_finite(self.name(), x));
        }
        Ok(f)
    }

    /// Jacobian, failing on wrong length or non-finite output.
    fn jacobian_checked(&self, x: &[f64]) -> Result<Matrix> {
        check_len(self.n(), x)?;
        let j = self.jacobian(x);
        if !j.is_finite() {
            return Err(non_finite(self.name(), x));
        }
        Ok(j)
    }

    /// `(f(x), Jf(x))`, failing if either contains NaN or ±∞.
    fn eval_pair(&self, x: &[f64]) -> Result<(Vec<f64>, Matrix)> {
        Ok((self.eval_checked(x)?, self.jacobian_checked(x)?))
    }
}

fn check_len(n: usize, x: &[f64]) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    Ok(())
}

fn non_finite(name: &str, x: &[f64]) -> Error {
    Error::NonFiniteValue {
        problem: name.to_string(),
        x: x.to_vec(),
    }
}

impl VectorObjective for Problem {
    fn name(&self) -> &str {
        self.name
    }

    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.m
    }

    fn lower(&self) -> &[f64] {
        &self.lower
    }

    fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.eval_raw(x)
    }

    fn jacobian(&self, x: &[f64]) -> Matrix {
        self.jacobian_raw(x)
    }
}

fn deb_g(x2: f64) -> f64 {
    let u = (x2 - 0.2) / 0.004;
    let w = (x2 - 0.6) / 0.4;
    2.0 - (-u * u).exp() - 0.8 * (-w * w).exp()
}

fn deb_g_prime(x2: f64) -> f64 {
    let u = (x2 - 0.2) / 0.004;
    let w = (x2 - 0.6) / 0.4;
    (-u * u).exp() * 2.0 * u / 0.004 + 0.8 * (-w * w).exp() * 2.0 * w / 0.4
}

fn hil_ab(x: &[f64]) -> (f64, f64) {
    let tau = 2.0 * PI;
    let a = tau / 360.0 * (HIL_AC + HIL_A1 * (tau * x[0]).sin() + HIL_A2 * (tau * x[1]).sin());
    let b = 1.0 + HIL_D * (tau * x[0]).cos();
    (a, b)
}

/// The 21 benchmark instances, in their canonical order.
pub fn suite() -> Vec<Problem> {
    use Family::*;
    const CHEN: &str = "Chen, Tang, Yang (2023)";
    const JOS: &str = "Jin, Olhofer, Sendhoff (2001)";
    const WIT: &str = "Witting (2012)";
    const TRI: &str = "Morovati, Pourkarimi (2019)";
    let mut v = vec![
        Problem::new("Imbalance1", 2, 2, (-2.0, 2.0), 40.0, CHEN, Imbalance { a: 0.1, b: 10.0, c: 1.0, d: 100.0 }),
        Problem::new("Imbalance2", 2, 2, (-2.0, 2.0), 40.0, CHEN, Imbalance { a: 1.0, b: 1.0, c: 100.0, d: 100.0 }),
        Problem::new("JOS1a", 50, 2, (-2.0, 2.0), 3.0, JOS, Jos1),
        Problem::new("JOS1b", 100, 2, (-2.0, 2.0), 3.0, JOS, Jos1),
        Problem::new("JOS1c", 200, 2, (-2.0, 2.0), 3.0, JOS, Jos1),
        Problem::new("JOS1d", 500, 2, (-2.0, 2.0), 3.0, JOS, Jos1),
        Problem::new("WIT1", 2, 2, (-2.0, 2.0), 40.0, WIT, Wit { lambda: 0.0 }),
        Problem::new("WIT2", 2, 2, (-2.0, 2.0), 40.0, WIT, Wit { lambda: 0.5 }),
        Problem::new("WIT3", 2, 2, (-2.0, 2.0), 40.0, WIT, Wit { lambda: 0.9 }),
        Problem::new("WIT4", 2, 2, (-2.0, 2.0), 40.0, WIT, Wit { lambda: 0.99 }),
        Problem::new("WIT5", 2, 2, (-2.0, 2.0), 40.0, WIT, Wit { lambda: 0.999 }),
        Problem::new("WIT6", 2, 2, (-2.0, 2.0), 40.0, WIT, Wit { lambda: 1.0 }),
        Problem::new("Deb", 2, 2, (0.1, 1.0), 3.0, "Deb (1999)", Deb),
        Problem::new("PNR", 2, 2, (-2.0, 2.0), 40.0, "Preuss, Naujoks, Rudolph (2006)", Pnr),
        Problem::new("DD1c", 5, 2, (-10.0, 10.0), 3.0, "Das, Dennis (1998)", Dd1),
        Problem::new("DD1d", 5, 2, (-20.0, 20.0), 3.0, "Das, Dennis (1998)", Dd1),
        Problem::new("TRIDIA1", 3, 3, (-1.0, 1.0), 40.0, TRI, Tridia1),
        Problem::new("TRIDIA2", 4, 4, (-1.0, 1.0), 40.0, TRI, Tridia2),
        Problem::new("LTDZ", 3, 3, (0.0, 1.0), 40.0, "Laumanns, Thiele, Deb, Zitzler (2002)", Ltdz),
        Problem::new("Hil", 2, 2, (0.0, 5.0), 40.0, "Hillermeier (2001)", Hil),
        Problem::new("SD", 4, 2, (-2.0, 2.0), 40.0, "Stadler, Dauer (1993)", Sd),
    ];
    for (i, p) in v.iter_mut().enumerate() {
        p.suite_index = Some(i);
    }
    v
}

/// Looks a suite problem up by name, ignoring ASCII case.
pub fn by_name(name: &str) -> Result<Problem> {
    suite()
        .into_iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}

/// Central-difference Jacobian with per-coordinate step `h = 1e-6·(1 + |x_j|)`.
pub fn central_difference_jacobian<P: VectorObjective + ?Sized>(p: &P, x: &[f64]) -> Result<Matrix> {
    let mut j = Matrix::zeros(p.m(), p.n());
    let mut xp = x.to_vec();
    for k in 0..p.n() {
        let h = 1e-6 * (1.0 + x[k].abs());
        xp[k] = x[k] + h;
        let fp = p.eval_checked(&xp)?;
        xp[k] = x[k] - h;
        let fm = p.eval_checked(&xp)?;
        xp[k] = x[k];
        for i in 0..p.m() {
            j.row_mut(i)[k] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(j)
}

/// Row-scaled discrepancy `max_i ‖aᵢ − bᵢ‖∞ / max(1, ‖aᵢ‖∞)`.
pub fn jacobian_rel_error(analytic: &Matrix, numeric: &Matrix) -> f64 {
    analytic
        .iter_rows()
        .zip(numeric.iter_rows())
        .map(|(a, b)| {
            let diff = a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
            let scale = a.iter().map(|u| u.abs()).fold(1.0, f64::max);
            diff / scale
        })
        .fold(0.0, f64::max)
}

/// Worst analytic-vs-finite-difference Jacobian error over `trials` seeded
/// interior points.
pub fn check_gradients(p: &Problem, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, p.stream_id() ^ 0x6772_6164);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let x = interior_point(p, &mut rng);
        let analytic = p.jacobian_checked(&x)?;
        let numeric = central_difference_jacobian(p, &x)?;
        worst = worst.max(jacobian_rel_error(&analytic, &numeric));
    }
    Ok(worst)
}

fn interior_point<R: Rng>(p: &Problem, rng: &mut R) -> Vec<f64> {
    // pull off the faces so x ± h stays in the box
    uniform_point(p, rng)
        .into_iter()
        .zip(p.lower().iter().zip(p.upper()))
        .map(|(v, (&lo, &hi))| v.clamp(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_has_expected_shape() {
        let s = suite();
        assert_eq!(s.len(), 21);
        for p in &s {
            assert_eq!(p.lower().len(), p.n());
            assert_eq!(p.upper().len(), p.n());
            assert!(p.lower().iter().zip(p.upper()).all(|(l, u)| l < u));
            assert!(p.eta_default() > 0.0);
            let x: Vec<f64> = p.lower().iter().zip(p.upper()).map(|(l, u)| 0.5 * (l + u) + 0.013).collect();
            assert_eq!(p.evaluate(&x).len(), p.m());
        }
    }

    #[test]
    fn table_values() {
        assert_eq!(by_name("Imbalance1").unwrap().eta_default(), 40.0);
        let j = by_name("JOS1a").unwrap();
        assert_eq!((j.n(), j.m(), j.eta_default()), (50, 2, 3.0));
        assert!(j.lower().iter().all(|&v| v == -2.0) && j.upper().iter().all(|&v| v == 2.0));
        assert_eq!(by_name("Deb").unwrap().lower(), &[0.1, 0.1]);
        assert_eq!(by_name("dd1d").unwrap().upper(), &[20.0; 5]);
        let dims: Vec<_> = ["TRIDIA1", "TRIDIA2", "LTDZ", "SD"]
            .iter()
            .map(|n| {
                let p = by_name(n).unwrap();
                (p.n(), p.m())
            })
            .collect();
        assert_eq!(dims, vec![(3, 3), (4, 4), (3, 3), (4, 2)]);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(by_name("ZDT1"), Err(Error::UnknownProblem(_))));
    }

    #[test]
    fn spot_values() {
        let jos = by_name("JOS1a").unwrap();
        assert_eq!(jos.evaluate(&[0.0; 50]), vec![0.0, 4.0]);
        let imb = by_name("Imbalance1").unwrap();
        assert_eq!(imb.evaluate(&[0.0, 0.0]), vec![0.0, 252_500.0]);
        let wit6 = by_name("WIT6").unwrap();
        assert_eq!(wit6.evaluate(&[2.0, 2.0])[0], 0.0);
    }

    #[test]
    fn sd_zero_coordinate_is_non_finite() {
        let sd = by_name("SD").unwrap();
        let err = sd.eval_pair(&[1.0, 0.0, 1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteValue { .. }));
    }

    #[test]
    fn wrong_length_is_reported() {
        let p = by_name("PNR").unwrap();
        assert_eq!(
            p.eval_pair(&[1.0]).unwrap_err(),
            Error::DimensionMismatch { expected: 2, found: 1 }
        );
    }

    #[test]
    fn deb_g_positive_on_box() {
        for k in 0..100 {
            let x2 = 0.1 + 0.9 * k as f64 / 99.0;
            assert!(deb_g(x2) > 0.0);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        for p in suite() {
            let err = check_gradients(&p, 20, 7).unwrap();
            assert!(err <= 1e-5, "{}: {err:e}", p.name());
        }
    }
}
