//! Reduced simplicial homology over the rationals: boundary matrices with the
//! sorted-vertex orientation convention, exact ranks, and Betti profiles.
//!
//! The chain complex is augmented (the empty face is included), so the void
//! complex has reduced Betti number 1 in dimension -1, and a complex with c
//! connected components has reduced Betti number c - 1 in dimension 0.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::complex::{Face, SimplicialComplex};
use crate::linalg::exact::SparseIntMatrix;

/// Profile of reduced Betti numbers, indexed from -1 up to the dimension of
/// the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiProfile {
    values: Vec<u64>,
}

impl BettiProfile {
    /// Reduced Betti number in dimension k; zero outside the stored range.
    pub fn betti(&self, k: i64) -> u64 {
        if k < -1 {
            return 0;
        }
        self.values.get((k + 1) as usize).copied().unwrap_or(0)
    }

    /// Values (beta_{-1}, beta_0, ..., beta_dim).
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// 1 + sum_k (-1)^k beta_k over k >= 0 (equals the Euler characteristic
    /// of a non-void complex).
    pub fn euler_characteristic(&self) -> i64 {
        let mut acc = 1i64;
        for (i, &b) in self.values.iter().enumerate().skip(1) {
            let k = i as i64 - 1;
            acc += if k % 2 == 0 { b as i64 } else { -(b as i64) };
        }
        acc
    }
}

/// The boundary matrix from k-faces to (k-1)-faces of the augmented chain
/// complex: rows are (k-1)-faces, columns are k-faces, entries are the
/// alternating signs of the sorted-vertex orientation. For k = 0 the single
/// row is the empty face with all entries +1.
pub fn boundary_matrix(k: &SimplicialComplex, dim: i64) -> SparseIntMatrix {
    let cols = k.faces_of_dim(dim);
    let rows = k.faces_of_dim(dim - 1);
    let row_index: BTreeMap<&Face, usize> = rows.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut triplets = Vec::new();
    for (j, face) in cols.iter().enumerate() {
        for (drop, sub) in face.boundary().into_iter().enumerate() {
            let i = row_index[&sub];
            let sign = if drop % 2 == 0 { 1 } else { -1 };
            triplets.push((i, j, BigInt::from(sign)));
        }
    }
    SparseIntMatrix::from_triplets(rows.len(), cols.len(), triplets)
}

/// Exact rank of an integer matrix over the rationals.
pub fn rank_over_rationals(m: &SparseIntMatrix) -> usize {
    m.rank()
}

/// Reduced Betti numbers over Q: beta_k = f_k - rank d_k - rank d_{k+1}.
pub fn betti(k: &SimplicialComplex) -> BettiProfile {
    let dim = k.dim();
    let mut ranks = Vec::with_capacity((dim + 2) as usize);
    for d in 0..=dim + 1 {
        ranks.push(rank_over_rationals(&boundary_matrix(k, d)) as i64);
    }
    let mut values = Vec::with_capacity((dim + 2) as usize);
    for d in -1..=dim {
        let n = k.f(d) as i64;
        let rank_out = if d >= 0 { ranks[d as usize] } else { 0 };
        let rank_in = ranks[(d + 1) as usize];
        let b = n - rank_out - rank_in;
        debug_assert!(b >= 0, "negative Betti number");
        values.push(b as u64);
    }
    BettiProfile { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn boundary_simplex(d: usize) -> SimplicialComplex {
        SimplicialComplex::from_facets((0..=d as u32).combinations(d).collect::<Vec<_>>())
    }

    fn cycle(vertices: &[u32]) -> SimplicialComplex {
        let n = vertices.len();
        SimplicialComplex::from_facets(
            (0..n).map(|i| vec![vertices[i], vertices[(i + 1) % n]]),
        )
    }

    #[test]
    fn boundary_composition_is_zero() {
        for k in [boundary_simplex(3), boundary_simplex(4), cycle(&[0, 1, 2, 3])] {
            for d in 1..=k.dim() {
                let a = boundary_matrix(&k, d);
                let b = boundary_matrix(&k, d + 1);
                assert!(a.multiply(&b).is_zero(), "d{d} o d{} != 0", d + 1);
            }
        }
    }

    #[test]
    fn spheres_have_top_betti_one() {
        for d in 1..=5usize {
            let k = boundary_simplex(d + 1);
            let b = betti(&k);
            for i in -1..=(d as i64) {
                let expected = if i == d as i64 { 1 } else { 0 };
                assert_eq!(b.betti(i), expected, "d={d}, i={i}");
            }
        }
    }

    #[test]
    fn four_cycle_is_a_circle() {
        let b = betti(&cycle(&[0, 1, 2, 3]));
        assert_eq!(b.betti(0), 0);
        assert_eq!(b.betti(1), 1);
        assert_eq!(rank_over_rationals(&boundary_matrix(&cycle(&[0, 1, 2, 3]), 1)), 3);
    }

    #[test]
    fn disjoint_union_adds_betti() {
        let two = SimplicialComplex::from_facets([
            vec![0u32, 1],
            vec![1, 2],
            vec![2, 3],
            vec![3, 0],
            vec![10, 11],
            vec![11, 12],
            vec![12, 13],
            vec![13, 10],
        ]);
        let b = betti(&two);
        assert_eq!(b.betti(0), 1);
        assert_eq!(b.betti(1), 2);
        assert_eq!(b.betti(-1), 0);
    }

    #[test]
    fn void_complex_has_betti_minus_one() {
        let b = betti(&SimplicialComplex::void());
        assert_eq!(b.betti(-1), 1);
    }

    #[test]
    fn euler_consistency() {
        for k in [boundary_simplex(3), boundary_simplex(5), cycle(&[0, 1, 2, 3, 4])] {
            assert_eq!(k.euler_characteristic(), betti(&k).euler_characteristic());
        }
    }
}
