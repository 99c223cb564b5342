//! Barzilai–Borwein step sizes and their safeguarded combination.

use crate::linalg::{dot, norm_sq};

/// BB candidates for a secant pair `(s, v)`; `None` marks a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BbSteps {
    /// Long step `⟨s,s⟩ / ⟨s,v⟩`.
    pub bb1: Option<f64>,
    /// Short step `⟨s,v⟩ / ⟨v,v⟩`.
    pub bb2: Option<f64>,
    /// Geometric mean `‖s‖ / ‖v‖`.
    pub bb3: Option<f64>,
}

pub fn bb_steps(s: &[f64], v: &[f64]) -> BbSteps {
    let ss = norm_sq(s);
    let sv = dot(s, v);
    let vv = norm_sq(v);
    BbSteps {
        bb1: (sv != 0.0).then(|| ss / sv),
        bb2: (vv != 0.0).then(|| sv / vv),
        bb3: (vv != 0.0).then(|| (ss / vv).sqrt()),
    }
}

/// `max(alpha_min, min(bb1, bb3, alpha_max))` over the candidates present;
/// `1` when neither BB value exists.
pub fn clamp_initial_step(bb1: Option<f64>, bb3: Option<f64>, alpha_min: f64, alpha_max: f64) -> f64 {
    if bb1.is_none() && bb3.is_none() {
        return 1.0;
    }
    let upper = [bb1, bb3]
        .into_iter()
        .flatten()
        .fold(alpha_max, f64::min);
    alpha_min.max(upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn collinear_pair() {
        let b = bb_steps(&[1.0, 0.0], &[0.5, 0.0]);
        assert_eq!((b.bb1, b.bb2, b.bb3), (Some(2.0), Some(2.0), Some(2.0)));
    }

    #[test]
    fn skewed_pair() {
        let b = bb_steps(&[1.0, 1.0], &[2.0, 0.0]);
        assert_eq!(b.bb1, Some(1.0));
        assert_eq!(b.bb2, Some(0.5));
        assert_abs_diff_eq!(b.bb3.unwrap(), 0.5_f64.sqrt(), epsilon = 1e-15);
        // bb3 is the geometric mean of bb1 and bb2 when both are positive
        assert_abs_diff_eq!(b.bb3.unwrap(), (b.bb1.unwrap() * b.bb2.unwrap()).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn negative_curvature_pair() {
        let b = bb_steps(&[1.0, 0.0], &[-1.0, 0.0]);
        assert_eq!(b.bb1, Some(-1.0));
        assert_eq!(b.bb3, Some(1.0));
        assert_eq!(clamp_initial_step(b.bb1, b.bb3, 1e-3, 1e3), 1e-3);
    }

    #[test]
    fn degenerate_pairs() {
        let b = bb_steps(&[1.0, 0.0], &[0.0, 0.0]);
        assert_eq!(b, BbSteps::default());
        assert_eq!(clamp_initial_step(None, None, 1e-3, 1e3), 1.0);
        let b = bb_steps(&[1.0, 0.0], &[0.0, 1.0]);
        assert_eq!(b.bb1, None);
        assert_eq!(b.bb3, Some(1.0));
    }

    #[test]
    fn clamp_examples() {
        assert_eq!(clamp_initial_step(Some(2.0), Some(2.0), 1e-3, 1e3), 2.0);
        assert_eq!(clamp_initial_step(Some(5e4), Some(2e4), 1e-3, 1e3), 1e3);
        assert_eq!(clamp_initial_step(Some(1e-7), None, 1e-3, 1e3), 1e-3);
    }

    proptest! {
        #[test]
        fn clamped_step_stays_in_range(
            bb1 in prop::option::of(-1e6f64..1e6),
            bb3 in prop::option::of(0.0f64..1e6),
        ) {
            let a = clamp_initial_step(bb1, bb3, 1e-3, 1e3);
            if bb1.is_some() || bb3.is_some() {
                prop_assert!((1e-3..=1e3).contains(&a));
            } else {
                prop_assert_eq!(a, 1.0);
            }
        }
    }
}
