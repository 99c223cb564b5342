//! Frank–Wolfe solver for `min_{λ ∈ Δ_m} ½‖Σᵢ λᵢ gᵢ‖²`.
//!
//! All work happens on the `m x m` Gram matrix `Q = G Gᵀ`, so the cost per
//! iteration is `O(m²)` regardless of the decision dimension. Line searches
//! are exact (the objective is quadratic along any segment).

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq, Matrix};

/// Frank–Wolfe flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FwVariant {
    /// Toward-vertex steps only.
    Classic,
    /// Adds away steps from the worst vertex in the support, which gives a
    /// linear rate when the optimum sits on a face of the simplex.
    #[default]
    AwayStep,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualOptions {
    pub tol: f64,
    /// `None` means `10_000·m`.
    pub max_iter: Option<usize>,
    pub variant: FwVariant,
}

impl Default for DualOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: None,
            variant: FwVariant::default(),
        }
    }
}

impl DualOptions {
    pub fn iteration_cap(&self, m: usize) -> usize {
        self.max_iter.unwrap_or(10_000 * m)
    }
}

/// A point of the unit simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks `λ ≥ 0` and `|Σλ − 1| ≤ 1e-12`.
    pub fn is_valid(&self) -> bool {
        self.0.iter().all(|&v| v >= 0.0) && (self.0.iter().sum::<f64>() - 1.0).abs() <= 1e-12
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualResult {
    pub weights: SimplexWeights,
    /// `Σ λᵢ gᵢ`
    pub combined: Vec<f64>,
    /// `½‖combined‖²`
    pub value: f64,
    /// Frank–Wolfe gap at the returned point.
    pub fw_gap: f64,
    pub iterations: usize,
}

/// Solves the dual over the rows of `rows` with the default variant.
pub fn solve_dual<R: AsRef<[f64]>>(rows: &[R], tol: f64, max_iter: usize) -> Result<DualResult> {
    let g = Matrix::from_rows(rows)?;
    solve_dual_matrix(
        &g,
        &DualOptions {
            tol,
            max_iter: Some(max_iter),
            ..DualOptions::default()
        },
    )
}

/// Solves the dual over the rows of `g`.
pub fn solve_dual_matrix(g: &Matrix, opts: &DualOptions) -> Result<DualResult> {
    let m = g.rows();
    if m == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidConfig(format!("dual tolerance {} must be positive", opts.tol)));
    }
    let q = gram(g);
    let (lambda, iterations) = frank_wolfe(&q, m, opts);
    let grad = sym_mul(&q, m, &lambda);
    let fw_gap = gap(&lambda, &grad);
    let combined = g.combine_rows(&lambda);
    let value = 0.5 * norm_sq(&combined);
    Ok(DualResult {
        weights: SimplexWeights(lambda),
        combined,
        value,
        fw_gap,
        iterations,
    })
}

fn gram(g: &Matrix) -> Vec<f64> {
    let m = g.rows();
    let mut q = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let v = dot(g.row(i), g.row(j));
            q[i * m + j] = v;
            q[j * m + i] = v;
        }
    }
    q
}

fn sym_mul(q: &[f64], m: usize, v: &[f64]) -> Vec<f64> {
    (0..m).map(|i| dot(&q[i * m..(i + 1) * m], v)).collect()
}

/// Lowest index attaining the minimum.
fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x < v[best] {
            best = i;
        }
    }
    best
}

fn gap(lambda: &[f64], grad: &[f64]) -> f64 {
    let j = argmin(grad);
    (dot(lambda, grad) - grad[j]).max(0.0)
}

fn frank_wolfe(q: &[f64], m: usize, opts: &DualOptions) -> (Vec<f64>, usize) {
    let mut lambda = vec![1.0 / m as f64; m];
    if m == 1 {
        return (lambda, 0);
    }
    let cap = opts.iteration_cap(m);
    let mut it = 0;
    while it < cap {
        let grad = sym_mul(q, m, &lambda);
        let lql = dot(&lambda, &grad);
        let j = argmin(&grad);
        let fw_gap = lql - grad[j];
        if fw_gap <= opts.tol {
            break;
        }

        let away = match opts.variant {
            FwVariant::Classic => None,
            FwVariant::AwayStep => {
                let mut a = None;
                for i in 0..m {
                    if lambda[i] > 0.0 && a.is_none_or(|k: usize| grad[i] > grad[k]) {
                        a = Some(i);
                    }
                }
                a.filter(|&a| grad[a] - lql > fw_gap && lambda[a] < 1.0)
            }
        };

        it += 1;
        match away {
            None => {
                // direction e_j − λ
                let num = grad[j] - lql;
                let den = q[j * m + j] - 2.0 * grad[j] + lql;
                if den <= 0.0 {
                    break;
                }
                let gamma = (-num / den).clamp(0.0, 1.0);
                if gamma == 0.0 {
                    break;
                }
                for v in lambda.iter_mut() {
                    *v *= 1.0 - gamma;
                }
                lambda[j] += gamma;
            }
            Some(a) => {
                // direction λ − e_a
                let num = lql - grad[a];
                let den = lql - 2.0 * grad[a] + q[a * m + a];
                if den <= 0.0 {
                    break;
                }
                let gamma_max = lambda[a] / (1.0 - lambda[a]);
                let gamma = (-num / den).clamp(0.0, gamma_max);
                if gamma == 0.0 {
                    break;
                }
                for v in lambda.iter_mut() {
                    *v *= 1.0 + gamma;
                }
                if gamma == gamma_max {
                    lambda[a] = 0.0;
                } else {
                    lambda[a] = (lambda[a] - gamma).max(0.0);
                }
            }
        }
    }
    // keep Σλ = 1 against rounding drift
    let s: f64 = lambda.iter().sum();
    for v in lambda.iter_mut() {
        *v /= s;
    }
    (lambda, it)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn phi(rows: &[Vec<f64>], lambda: &[f64]) -> f64 {
        let n = rows[0].len();
        let mut c = vec![0.0; n];
        for (r, l) in rows.iter().zip(lambda) {
            for k in 0..n {
                c[k] += l * r[k];
            }
        }
        0.5 * c.iter().map(|v| v * v).sum::<f64>()
    }

    /// Closed-form minimum for two vectors.
    fn two_point_min(g1: &[f64], g2: &[f64]) -> f64 {
        let diff: Vec<f64> = g1.iter().zip(g2).map(|(a, b)| a - b).collect();
        let den = diff.iter().map(|v| v * v).sum::<f64>();
        let l1 = if den == 0.0 {
            0.5
        } else {
            (g2.iter().zip(g2.iter().zip(g1)).map(|(a, (b, c))| a * (b - c)).sum::<f64>() / den)
                .clamp(0.0, 1.0)
        };
        phi(&[g1.to_vec(), g2.to_vec()], &[l1, 1.0 - l1])
    }

    #[test]
    fn single_objective() {
        let r = solve_dual(&[[3.0, 4.0]], 1e-12, 100).unwrap();
        assert_eq!(r.weights.as_slice(), &[1.0]);
        assert_eq!(r.value, 12.5);
    }

    #[test]
    fn orthogonal_pair_is_symmetric() {
        let r = solve_dual(&[[1.0, 0.0], [0.0, 1.0]], 1e-12, 200).unwrap();
        assert_abs_diff_eq!(r.weights.as_slice()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.value, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn collinear_pair_hits_vertex() {
        let r = solve_dual(&[[1.0, 0.0], [3.0, 0.0]], 1e-12, 200).unwrap();
        assert_abs_diff_eq!(r.weights.as_slice()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn ragged_input_rejected() {
        let rows = vec![vec![1.0, 2.0], vec![1.0]];
        assert!(matches!(
            solve_dual(&rows, 1e-12, 10),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn matches_two_point_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let n = rng.gen_range(1..6);
            let g1: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let g2: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let r = solve_dual(&[g1.clone(), g2.clone()], 1e-12, 200).unwrap();
            assert_abs_diff_eq!(r.value, two_point_min(&g1, &g2), epsilon = 1e-10);
        }
    }

    #[test]
    fn both_variants_match_grid_on_three_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // classic steps only converge sublinearly
        for (variant, tol) in [(FwVariant::Classic, 1e-5), (FwVariant::AwayStep, 1e-12)] {
            for _ in 0..20 {
                let rows: Vec<Vec<f64>> = (0..3)
                    .map(|_| (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect())
                    .collect();
                let g = Matrix::from_rows(&rows).unwrap();
                let opts = DualOptions { variant, ..DualOptions::default() };
                let r = solve_dual_matrix(&g, &opts).unwrap();
                let mut best = f64::INFINITY;
                let steps = 200;
                for a in 0..=steps {
                    for b in 0..=(steps - a) {
                        let l = [a as f64 / steps as f64, b as f64 / steps as f64, (steps - a - b) as f64 / steps as f64];
                        best = best.min(phi(&rows, &l));
                    }
                }
                assert!(r.value <= best + tol, "{variant:?}: {} > {best}", r.value);
                assert!(r.weights.is_valid());
            }
        }
    }

    #[test]
    fn away_steps_converge_on_a_face() {
        // optimum on the edge between the first two vertices; the third
        // vertex attracts classic steps and causes zig-zagging
        let rows = vec![vec![1.0, 0.2], vec![-1.0, 0.2], vec![0.0, 5.0]];
        let g = Matrix::from_rows(&rows).unwrap();
        let r = solve_dual_matrix(&g, &DualOptions::default()).unwrap();
        assert!(r.fw_gap <= 1e-12, "gap {}", r.fw_gap);
        assert_abs_diff_eq!(r.value, 0.5 * 0.04, epsilon = 1e-13);
        assert_eq!(r.weights.as_slice()[2], 0.0);
    }

    #[test]
    fn zero_row_with_origin_in_hull() {
        // degenerate: many optimal weights, all with value 0
        let rows = vec![
            vec![0.0, 0.0],
            vec![7.981952744237215, -8.883698555174416],
            vec![-3.0480701549479385, 5.817754240123085],
            vec![-2.851611821168454, 3.1623372573884203],
        ];
        let r = solve_dual(&rows, 1e-12, 40_000).unwrap();
        assert!(r.fw_gap <= 1e-12, "gap {}", r.fw_gap);
        assert!(r.value <= 1e-20);
    }

    #[test]
    fn deterministic() {
        let rows = vec![vec![0.3, -1.2, 2.0], vec![1.0, 1.0, -0.5], vec![-0.7, 0.1, 0.4]];
        let a = solve_dual(&rows, 1e-12, 250).unwrap();
        let b = solve_dual(&rows, 1e-12, 250).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn objective_never_increases() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for variant in [FwVariant::Classic, FwVariant::AwayStep] {
            for _ in 0..50 {
                let m = rng.gen_range(2..6);
                let rows: Vec<Vec<f64>> = (0..m)
                    .map(|_| (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect())
                    .collect();
                let g = Matrix::from_rows(&rows).unwrap();
                let mut prev = f64::INFINITY;
                for cap in 0..40 {
                    let opts = DualOptions { tol: 1e-14, max_iter: Some(cap), variant };
                    let v = solve_dual_matrix(&g, &opts).unwrap().value;
                    assert!(v <= prev * (1.0 + 1e-12) + 1e-15, "{variant:?} cap {cap}: {v} > {prev}");
                    prev = v;
                }
            }
        }
    }
}
