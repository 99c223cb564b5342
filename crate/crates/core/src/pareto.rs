//! Componentwise dominance for minimization.

/// `a ≤ b` componentwise with at least one strict inequality.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// `mask[i]` is true when no other point dominates `points[i]`.
/// Duplicates do not dominate each other.
pub fn nondominated_mask<R: AsRef<[f64]>>(points: &[R]) -> Vec<bool> {
    (0..points.len())
        .map(|i| {
            !points
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && dominates(q.as_ref(), points[i].as_ref()))
        })
        .collect()
}
