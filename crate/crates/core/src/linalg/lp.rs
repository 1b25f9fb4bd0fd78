//! A small dense phase-1 simplex solver, used for face-vs-subspace
//! intersection tests (feasibility of a convex combination hitting an affine
//! subspace).

use nalgebra::DVector;

/// Decides whether `target` lies in the convex hull of `points`, by phase-1
/// simplex on { lambda >= 0, sum lambda = 1, sum lambda_i p_i = target }.
pub fn in_convex_hull(points: &[DVector<f64>], target: &DVector<f64>, tol: f64) -> bool {
    let n = points.len();
    if n == 0 {
        return false;
    }
    let k = target.len();
    let m = k + 1;
    // Tableau: m constraint rows + 1 objective row; columns = n original
    // variables, m artificials, 1 rhs.
    let cols = n + m + 1;
    let mut t = vec![vec![0.0f64; cols]; m + 1];
    for r in 0..k {
        for (j, p) in points.iter().enumerate() {
            t[r][j] = p[r];
        }
        t[r][cols - 1] = target[r];
    }
    for j in 0..n {
        t[k][j] = 1.0;
    }
    t[k][cols - 1] = 1.0;
    // Make rhs non-negative, then install artificial basis.
    for r in 0..m {
        if t[r][cols - 1] < 0.0 {
            for v in t[r].iter_mut() {
                *v = -*v;
            }
        }
        t[r][n + r] = 1.0;
    }
    // Phase-1 objective row: sum of the constraint rows over the original
    // columns (reduced costs for minimizing the artificial sum).
    for j in 0..cols {
        t[m][j] = (0..m).map(|r| t[r][j]).sum();
    }
    for r in 0..m {
        t[m][n + r] = 0.0;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_iters = 50 * (n + m).max(16);
    for _ in 0..max_iters {
        // Bland's rule: smallest-index column with positive reduced cost.
        let Some(enter) = (0..n + m).find(|&j| t[m][j] > tol) else {
            break;
        };
        // Ratio test; Bland tie-break by basis variable index.
        let mut leave: Option<(f64, usize, usize)> = None;
        for r in 0..m {
            if t[r][enter] > tol {
                let ratio = t[r][cols - 1] / t[r][enter];
                match leave {
                    Some((best, bi, _)) if (best, bi) <= (ratio, basis[r]) => {}
                    _ => leave = Some((ratio, basis[r], r)),
                }
            }
        }
        let Some((_, _, pr)) = leave else {
            // Phase-1 with artificial variables is always bounded.
            break;
        };
        let pivot = t[pr][enter];
        for v in t[pr].iter_mut() {
            *v /= pivot;
        }
        for r in 0..=m {
            if r != pr && t[r][enter].abs() > 0.0 {
                let factor = t[r][enter];
                for j in 0..cols {
                    t[r][j] -= factor * t[pr][j];
                }
            }
        }
        basis[pr] = enter;
    }
    t[m][cols - 1].abs() <= tol.max(1e-12)
}

/// Feasibility of `conv(points)` meeting the affine subspace
/// { origin + span(directions) }: the points are projected onto an
/// orthonormal complement of the directions, where the test becomes a
/// point-in-hull query.
pub fn face_meets_affine_subspace(
    points: &[DVector<f64>],
    origin: &DVector<f64>,
    directions: &[DVector<f64>],
    tol: f64,
) -> bool {
    let dim = origin.len();
    let complement = super::float::orthonormal_complement(directions, dim);
    if complement.is_empty() {
        // The subspace is all of space.
        return !points.is_empty();
    }
    let project = |v: &DVector<f64>| {
        DVector::from_iterator(complement.len(), complement.iter().map(|q| q.dot(v)))
    };
    let projected: Vec<DVector<f64>> = points.iter().map(&project).collect();
    in_convex_hull(&projected, &project(origin), tol)
}
