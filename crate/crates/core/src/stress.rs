//! Framework rigidity and stress spaces: rigidity matrices, classical (edge)
//! stresses, generic rigidity tests, affine k-stress spaces via the Minkowski
//! balancing condition, restricted-support stress dimensions, and local
//! stresses near vertices with non-stacked links.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{is_stacked_2sphere, Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::linalg::exact::{RatMatrix, SparseIntMatrix};
use crate::linalg::float::{orthonormal_complement, svd_nullspace, svd_rank, SVD_REL_TOL};

/// A graph with an embedding of its vertices in R^d.
#[derive(Clone, Debug)]
pub struct Framework {
    d: usize,
    coords: Vec<DVector<f64>>,
    edges: Vec<(usize, usize)>,
}

impl Framework {
    pub fn new(d: usize, coords: Vec<DVector<f64>>, mut edges: Vec<(usize, usize)>) -> Self {
        assert!(coords.iter().all(|c| c.len() == d));
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        assert!(edges.iter().all(|&(a, b)| a < b && b < coords.len()));
        Framework { d, coords, edges }
    }

    /// The 1-skeleton framework of a simplicial polytope.
    pub fn from_polytope_graph(p: &Polytope) -> Framework {
        Framework::new(
            p.d(),
            p.vertices().points().to_vec(),
            p.edges().into_iter().collect(),
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn coords(&self) -> &[DVector<f64>] {
        &self.coords
    }

    /// The rigidity matrix: one row per edge {u,v}, with phi(u) - phi(v) in
    /// u's coordinate block and the negative in v's block.
    pub fn rigidity_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.edges.len(), self.d * self.n());
        for (r, &(u, v)) in self.edges.iter().enumerate() {
            for i in 0..self.d {
                let diff = self.coords[u][i] - self.coords[v][i];
                m[(r, u * self.d + i)] = diff;
                m[(r, v * self.d + i)] = -diff;
            }
        }
        m
    }

    /// Exact-rational rigidity matrix, rows scaled to integers.
    fn rigidity_matrix_exact(&self) -> SparseIntMatrix {
        let mut triplets = Vec::new();
        for (r, &(u, v)) in self.edges.iter().enumerate() {
            let mut cols = Vec::with_capacity(2 * self.d);
            let mut vals: Vec<BigRational> = Vec::with_capacity(2 * self.d);
            for i in 0..self.d {
                let a = BigRational::from_float(self.coords[u][i]).expect("finite");
                let b = BigRational::from_float(self.coords[v][i]).expect("finite");
                let diff = a - b;
                if !diff.is_zero() {
                    cols.push(u * self.d + i);
                    vals.push(diff.clone());
                    cols.push(v * self.d + i);
                    vals.push(-diff);
                }
            }
            for (c, v) in cols.into_iter().zip(scale_rationals(&vals)) {
                triplets.push((r, c, v));
            }
        }
        SparseIntMatrix::from_triplets(self.edges.len(), self.d * self.n(), triplets)
    }

    pub fn rigidity_rank_float(&self) -> usize {
        svd_rank(&self.rigidity_matrix(), SVD_REL_TOL)
    }

    pub fn rigidity_rank_exact(&self) -> usize {
        self.rigidity_matrix_exact().rank()
    }
}

/// Clears denominators of a rational row (multiplying a row by a positive
/// integer changes neither rank nor kernel).
fn scale_rationals(vals: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    use num_traits::One;
    let mut lcm = BigInt::one();
    for v in vals {
        lcm = lcm.lcm(v.denom());
    }
    vals.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
}

/// A basis of a stress space: support faces and one coefficient vector per
/// basis element, indexed parallel to `support`.
#[derive(Clone, Debug)]
pub struct StressBasis {
    /// Stress degree k: coefficients live on (k-1)-dimensional faces.
    pub degree: usize,
    pub support: Vec<Face>,
    pub vectors: Vec<DVector<f64>>,
}

impl StressBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree": self.degree,
            "support": self.support.iter().map(|f| f.vertices().to_vec()).collect::<Vec<_>>(),
            "vectors": self.vectors.iter().map(|v| v.iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>(),
        })
    }
}

/// Classical stress space of a framework (k = 2): the left kernel of the
/// rigidity matrix, one coefficient per edge.
pub fn stress_space(fw: &Framework) -> StressBasis {
    let rt = fw.rigidity_matrix().transpose();
    let vectors = svd_nullspace(&rt, SVD_REL_TOL);
    StressBasis {
        degree: 2,
        support: fw
            .edges()
            .iter()
            .map(|&(a, b)| Face::new(vec![a as u32, b as u32]))
            .collect(),
        vectors,
    }
}

/// Classical stress-space dimension with the exact backend.
pub fn stress_dim_exact(fw: &Framework) -> usize {
    fw.edges().len() - fw.rigidity_rank_exact()
}

/// Agreement-checked classical stress dimension (float SVD vs exact rank).
pub fn stress_dim_checked(fw: &Framework) -> Result<usize> {
    let float = fw.edges().len() - fw.rigidity_rank_float();
    let exact = stress_dim_exact(fw);
    if float != exact {
        return Err(Error::BackendMismatch { float, exact });
    }
    Ok(exact)
}

/// Maximum residual of the balancing condition at the framework's vertices.
pub fn stress_residual(fw: &Framework, omega: &DVector<f64>) -> f64 {
    let mut residual = 0.0f64;
    let mut acc: Vec<DVector<f64>> = (0..fw.n()).map(|_| DVector::zeros(fw.d())).collect();
    for (e, &(u, v)) in fw.edges().iter().enumerate() {
        let diff = &fw.coords()[u] - &fw.coords()[v];
        acc[u] += &diff * omega[e];
        acc[v] -= &diff * omega[e];
    }
    for a in &acc {
        residual = residual.max(a.amax());
    }
    residual
}

/// Monte-Carlo generic d-rigidity: the rank of the rigidity matrix at random
/// embeddings is compared with d*n - C(d+1,2); three seeds, majority vote.
pub fn is_generically_rigid(n: usize, edges: &[(usize, usize)], d: usize, seed: u64) -> bool {
    assert!(n >= d + 1, "generic rigidity is only defined here for n >= d+1");
    let full_rank = d * n - (d + 1) * d / 2;
    let mut votes = 0;
    for trial in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xC0FFEE + trial));
        let coords: Vec<DVector<f64>> = (0..n)
            .map(|_| DVector::from_iterator(d, (0..d).map(|_| rng.random_range(-1.0..1.0))))
            .collect();
        let fw = Framework::new(d, coords, edges.to_vec());
        if fw.rigidity_rank_float() == full_rank {
            votes += 1;
        }
    }
    votes >= 2
}

/// Homogenization: phi~(v) = (phi(v), 1) in R^{d+1}.
pub fn homogenize(coords: &[DVector<f64>]) -> Vec<DVector<f64>> {
    coords
        .iter()
        .map(|p| {
            let mut v = DVector::zeros(p.len() + 1);
            v.rows_mut(0, p.len()).copy_from(p);
            v[p.len()] = 1.0;
            v
        })
        .collect()
}

/// The affine k-stress balancing system of a complex with vertex coordinates:
/// variables are the (k-1)-faces, and for every (k-2)-face tau the weighted
/// sum of homogenized opposite vertices must lie in span(phi~(tau)). The
/// float rows use an orthonormal complement of the span, the exact rows a
/// rational complement basis; both encode the same kernel.
pub struct BalancingSystem {
    pub faces: Vec<Face>,
    float_rows: DMatrix<f64>,
    exact: SparseIntMatrix,
}

impl BalancingSystem {
    pub fn build(k_complex: &SimplicialComplex, coords: &[DVector<f64>], k: usize) -> Result<Self> {
        assert!(k >= 1, "stress degree must be >= 1");
        let d = coords[0].len();
        let homog = homogenize(coords);
        let faces = k_complex.faces_of_dim(k as i64 - 1);
        // Genericity: the homogenized vertices of every (k-1)-face must be
        // linearly independent.
        for sigma in &faces {
            let rows: Vec<Vec<f64>> = sigma
                .vertices()
                .iter()
                .map(|&v| homog[v as usize].iter().copied().collect())
                .collect();
            let null = RatMatrix::from_f64_rows(&rows).nullspace();
            if null.len() != d + 1 - sigma.len() {
                return Err(Error::DegenerateSpan(sigma.clone()));
            }
        }
        // tau -> (column, opposite vertex) incidences.
        let taus = k_complex.faces_of_dim(k as i64 - 2);
        let tau_index: BTreeMap<&Face, usize> =
            taus.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut incidences: Vec<Vec<(usize, u32)>> = vec![Vec::new(); taus.len()];
        for (j, sigma) in faces.iter().enumerate() {
            for (drop, tau) in sigma.boundary().into_iter().enumerate() {
                let u = sigma.vertices()[drop];
                incidences[tau_index[&tau]].push((j, u));
            }
        }

        let mut float_triples: Vec<(usize, usize, f64)> = Vec::new();
        let mut exact_triples: Vec<(usize, usize, BigInt)> = Vec::new();
        let mut row = 0usize;
        for (ti, tau) in taus.iter().enumerate() {
            let span: Vec<DVector<f64>> =
                tau.vertices().iter().map(|&v| homog[v as usize].clone()).collect();
            let complement = orthonormal_complement(&span, d + 1);
            if complement.len() != d + 1 - tau.len() {
                return Err(Error::DegenerateSpan(tau.clone()));
            }
            let exact_complement: Vec<Vec<BigRational>> = if tau.is_empty() {
                // span{} = {0}: the complement is all of R^{d+1}.
                (0..=d)
                    .map(|i| {
                        let mut e = vec![BigRational::zero(); d + 1];
                        e[i] = num_traits::One::one();
                        e
                    })
                    .collect()
            } else {
                let span_rows: Vec<Vec<f64>> =
                    span.iter().map(|v| v.iter().copied().collect()).collect();
                RatMatrix::from_f64_rows(&span_rows).nullspace()
            };
            if exact_complement.len() != d + 1 - tau.len() {
                return Err(Error::DegenerateSpan(tau.clone()));
            }
            for q in &complement {
                for &(j, u) in &incidences[ti] {
                    let val = q.dot(&homog[u as usize]);
                    if val != 0.0 {
                        float_triples.push((row, j, val));
                    }
                }
                row += 1;
            }
            let exact_row_base = row - complement.len();
            for (qi, y) in exact_complement.iter().enumerate() {
                let mut cols = Vec::new();
                let mut vals: Vec<BigRational> = Vec::new();
                for &(j, u) in &incidences[ti] {
                    let mut acc = BigRational::zero();
                    for (c, yc) in y.iter().enumerate() {
                        if !yc.is_zero() {
                            let x = BigRational::from_float(homog[u as usize][c]).expect("finite");
                            acc += yc * x;
                        }
                    }
                    if !acc.is_zero() {
                        cols.push(j);
                        vals.push(acc);
                    }
                }
                for (c, v) in cols.into_iter().zip(scale_rationals(&vals)) {
                    exact_triples.push((exact_row_base + qi, c, v));
                }
            }
        }
        let mut float_rows = DMatrix::zeros(row, faces.len());
        for (r, c, v) in float_triples {
            float_rows[(r, c)] = v;
        }
        let exact = SparseIntMatrix::from_triplets(row, faces.len(), exact_triples);
        Ok(BalancingSystem { faces, float_rows, exact })
    }

    pub fn dim_float(&self) -> usize {
        self.faces.len() - svd_rank(&self.float_rows, SVD_REL_TOL)
    }

    pub fn dim_exact(&self) -> usize {
        self.faces.len() - self.exact.rank()
    }

    pub fn kernel_basis(&self) -> Vec<DVector<f64>> {
        svd_nullspace(&self.float_rows, SVD_REL_TOL)
    }

    /// Dimension of the subspace of stresses vanishing outside the given
    /// columns (restrict variables, keep every balancing row).
    fn restricted_dims(&self, keep: &[bool]) -> (usize, usize) {
        let kept: Vec<usize> = (0..self.faces.len()).filter(|&j| keep[j]).collect();
        let mut float_sub = DMatrix::zeros(self.float_rows.nrows(), kept.len());
        for (new_j, &j) in kept.iter().enumerate() {
            float_sub.set_column(new_j, &self.float_rows.column(j));
        }
        let remap: BTreeMap<usize, usize> =
            kept.iter().enumerate().map(|(new_j, &j)| (j, new_j)).collect();
        let mut exact_triples = Vec::new();
        for r in 0..self.exact.nrows() {
            for (c, v) in self.exact.row_entries(r) {
                if let Some(&nj) = remap.get(&c) {
                    exact_triples.push((r, nj, v.clone()));
                }
            }
        }
        let exact_sub =
            SparseIntMatrix::from_triplets(self.exact.nrows(), kept.len(), exact_triples);
        (
            kept.len() - svd_rank(&float_sub, SVD_REL_TOL),
            kept.len() - exact_sub.rank(),
        )
    }
}

/// Affine k-stress space of a complex embedded by `coords` (float backend for
/// the basis vectors).
pub fn affine_stress_space(
    k_complex: &SimplicialComplex,
    coords: &[DVector<f64>],
    k: usize,
) -> Result<StressBasis> {
    let system = BalancingSystem::build(k_complex, coords, k)?;
    Ok(StressBasis {
        degree: k,
        support: system.faces.clone(),
        vectors: system.kernel_basis(),
    })
}

/// Affine k-stress dimension with both backends; errors on disagreement.
pub fn affine_stress_dim_checked(
    k_complex: &SimplicialComplex,
    coords: &[DVector<f64>],
    k: usize,
) -> Result<usize> {
    let system = BalancingSystem::build(k_complex, coords, k)?;
    let float = system.dim_float();
    let exact = system.dim_exact();
    if float != exact {
        return Err(Error::BackendMismatch { float, exact });
    }
    Ok(exact)
}

/// Dimension of the space of k-stresses of K supported on the (k-1)-faces of
/// a subcomplex Gamma; both backends must agree.
pub fn stress_dim_supported_on(
    k_complex: &SimplicialComplex,
    coords: &[DVector<f64>],
    k: usize,
    gamma: &SimplicialComplex,
) -> Result<usize> {
    if !k_complex.has_subcomplex(gamma) {
        return Err(Error::NotSubcomplex);
    }
    let system = BalancingSystem::build(k_complex, coords, k)?;
    let keep: Vec<bool> = system.faces.iter().map(|f| gamma.contains(f)).collect();
    let (float, exact) = system.restricted_dims(&keep);
    if float != exact {
        return Err(Error::BackendMismatch { float, exact });
    }
    Ok(exact)
}

/// A classical stress supported near one vertex.
#[derive(Clone, Debug)]
pub struct LocalStress {
    pub vertex: usize,
    pub support_vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub coefficients: DVector<f64>,
    pub residual: f64,
}

/// For a simplicial 4-polytope: if link(v) is not stacked, produces a nonzero
/// classical stress supported in the graph ball N_2(v) (the framework induced
/// on N_2(v), which contains the extra chord the non-stacked link forces);
/// if the link is stacked, returns None.
pub fn local_stress_near_vertex(p: &Polytope, v: usize) -> Result<Option<LocalStress>> {
    if p.d() != 4 {
        return Err(Error::InvalidPolytope("local stresses are a d = 4 construction".into()));
    }
    let bc = p.boundary_complex();
    let link = bc.link(&Face::vertex(v as u32))?;
    if is_stacked_2sphere(&link)? {
        return Ok(None);
    }
    let ball: Vec<usize> = bc.graph_ball(v as u32, 2)?.into_iter().map(|u| u as usize).collect();
    let in_ball: std::collections::BTreeSet<usize> = ball.iter().copied().collect();
    let edges: Vec<(usize, usize)> = p
        .edges()
        .into_iter()
        .filter(|&(a, b)| in_ball.contains(&a) && in_ball.contains(&b))
        .collect();
    // Compact the framework onto the ball's vertices.
    let index: BTreeMap<usize, usize> = ball.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let coords: Vec<DVector<f64>> =
        ball.iter().map(|&u| p.vertices().point(u).clone()).collect();
    let local_edges: Vec<(usize, usize)> =
        edges.iter().map(|&(a, b)| (index[&a], index[&b])).collect();
    let fw = Framework::new(4, coords, local_edges);
    let basis = stress_space(&fw);
    let Some(omega) = basis.vectors.first() else {
        return Err(Error::InvalidPolytope(
            "no stress found in N_2(v) despite a non-stacked link".into(),
        ));
    };
    let residual = stress_residual(&fw, omega);
    Ok(Some(LocalStress {
        vertex: v,
        support_vertices: ball,
        edges: fw
            .edges()
            .iter()
            .map(|&(a, b)| {
                let orig = |i: usize| *index.iter().find(|(_, &ci)| ci == i).unwrap().0;
                (orig(a), orig(b))
            })
            .collect(),
        coefficients: omega.clone(),
        residual,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4_framework() -> Framework {
        let coords = vec![
            DVector::from_vec(vec![0.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.1]),
            DVector::from_vec(vec![0.3, 1.0]),
            DVector::from_vec(vec![0.4, 0.35]),
        ];
        let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        Framework::new(2, coords, edges)
    }

    #[test]
    fn single_edge_rank() {
        let fw = Framework::new(
            2,
            vec![DVector::from_vec(vec![0.0, 0.0]), DVector::from_vec(vec![1.0, 0.5])],
            vec![(0, 1)],
        );
        assert_eq!(fw.rigidity_rank_float(), 1);
        assert_eq!(fw.rigidity_rank_exact(), 1);
    }

    #[test]
    fn k4_in_the_plane() {
        let fw = k4_framework();
        assert_eq!(fw.rigidity_rank_float(), 5);
        assert_eq!(fw.rigidity_rank_exact(), 5);
        let basis = stress_space(&fw);
        assert_eq!(basis.dim(), 1);
        assert_eq!(stress_dim_checked(&fw).unwrap(), 1);
        assert!(stress_residual(&fw, &basis.vectors[0]) < 1e-10);
    }

    #[test]
    fn tree_has_no_stress() {
        let coords = vec![
            DVector::from_vec(vec![0.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.2]),
            DVector::from_vec(vec![0.4, 1.1]),
            DVector::from_vec(vec![-0.5, 0.8]),
        ];
        let fw = Framework::new(2, coords, vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(stress_dim_checked(&fw).unwrap(), 0);
    }

    #[test]
    fn generic_rigidity_votes() {
        // K_{d+1} is rigid in R^d.
        for d in 2..=4 {
            let n = d + 1;
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            assert!(is_generically_rigid(n, &edges, d, 11));
        }
        // A 5-cycle is flexible in the plane.
        let edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        assert!(!is_generically_rigid(5, &edges, 2, 11));
    }

    #[test]
    fn affine_k2_matches_classical_on_k4() {
        // Same configuration: balancing at vertices with homogenization is
        // exactly the classical stress condition.
        let fw = k4_framework();
        let complex = SimplicialComplex::from_facets([[0u32, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
        let dim = affine_stress_dim_checked(&complex, fw.coords(), 2).unwrap();
        assert_eq!(dim, 1);
    }

    #[test]
    fn affine_k1_dimension_is_points_minus_rank() {
        // Five generic points in R^2: sum w_i phi~(v_i) = 0 leaves dim 2.
        let coords = vec![
            DVector::from_vec(vec![0.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
            DVector::from_vec(vec![1.3, 1.1]),
            DVector::from_vec(vec![2.0, 0.3]),
        ];
        let complex = SimplicialComplex::from_facets((0..5u32).map(|v| [v]));
        let dim = affine_stress_dim_checked(&complex, &coords, 1).unwrap();
        assert_eq!(dim, 2);
    }

    #[test]
    fn degenerate_span_is_reported() {
        // Two coincident points make phi~ of the edge dependent.
        let coords = vec![
            DVector::from_vec(vec![0.5, 0.5]),
            DVector::from_vec(vec![0.5, 0.5]),
        ];
        let complex = SimplicialComplex::from_facets([[0u32, 1]]);
        assert!(matches!(
            BalancingSystem::build(&complex, &coords, 2),
            Err(Error::DegenerateSpan(_))
        ));
    }
}
