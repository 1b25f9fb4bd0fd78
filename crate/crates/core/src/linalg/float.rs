//! Floating-point rank/kernel computations, used as the fast backend next to
//! the exact rational one.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value cutoff for rank decisions.
pub const SVD_REL_TOL: f64 = 1e-8;

/// Numerical rank with the relative cutoff `tol * sigma_max`.
pub fn svd_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let max = svd.singular_values.max();
    if max == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Orthonormal basis of the right nullspace { x : M x = 0 }.
pub fn svd_nullspace(m: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    if m.ncols() == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..m.ncols())
            .map(|i| {
                let mut e = DVector::zeros(m.ncols());
                e[i] = 1.0;
                e
            })
            .collect();
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let max = svd.singular_values.max();
    let mut basis = Vec::new();
    for i in 0..vt.nrows() {
        let s = if i < svd.singular_values.len() { svd.singular_values[i] } else { 0.0 };
        if max == 0.0 || s <= rel_tol * max {
            basis.push(vt.row(i).transpose());
        }
    }
    // Thin SVD only yields min(nrows, ncols) right singular vectors; when the
    // matrix is wider than tall the remaining kernel directions are recovered
    // by completing the returned rows to an orthonormal basis.
    if m.ncols() > m.nrows() {
        let mut spanning: Vec<DVector<f64>> =
            (0..vt.nrows()).map(|i| vt.row(i).transpose()).collect();
        for extra in complete_basis(&spanning, m.ncols()) {
            spanning.push(extra.clone());
            basis.push(extra);
        }
    }
    basis
}

/// Extends a set of orthonormal vectors to an orthonormal basis of R^dim,
/// returning only the new vectors (an orthonormal basis of the complement).
pub fn complete_basis(vectors: &[DVector<f64>], dim: usize) -> Vec<DVector<f64>> {
    let mut have: Vec<DVector<f64>> = vectors.to_vec();
    let mut extra = Vec::new();
    for i in 0..dim {
        if have.len() == dim {
            break;
        }
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        // Two rounds of modified Gram-Schmidt for stability.
        for _ in 0..2 {
            for b in &have {
                let c = b.dot(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-10 {
            v /= norm;
            have.push(v.clone());
            extra.push(v);
        }
    }
    extra
}

/// Orthonormal basis of the orthogonal complement of span(vectors) in R^dim.
pub fn orthonormal_complement(vectors: &[DVector<f64>], dim: usize) -> Vec<DVector<f64>> {
    // Orthonormalize the spanning set first.
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &ortho {
                let c = b.dot(&w);
                w -= b * c;
            }
        }
        let norm = w.norm();
        if norm > 1e-12 {
            ortho.push(w / norm);
        }
    }
    complete_basis(&ortho, dim)
}
