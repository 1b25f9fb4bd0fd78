//! Shadow-boundary subcomplexes (faces projecting into the boundary of a
//! projected polytope) and witness-strip vertex sets around affine subspaces
//! inside spherical caps.

use nalgebra::DVector;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::geometry::{PointConfiguration, Polytope};
use crate::linalg::float::orthonormal_complement;
use crate::linalg::lp::face_meets_affine_subspace;

const PROJ_TOL: f64 = 1e-9;

/// The subcomplex of the boundary of P whose faces project into the boundary
/// of pi(P), where pi is the orthogonal projection onto span(basis).
///
/// The projection direction must be generic for P: distinct projected
/// vertices and no facet normal orthogonal to the subspace.
pub fn shadow_boundary_subcomplex(
    p: &Polytope,
    basis: &[DVector<f64>],
) -> Result<SimplicialComplex> {
    let d = p.d();
    let m = basis.len();
    if m == 0 || m >= d {
        return Err(Error::NonGenericProjection);
    }
    // Orthonormalize the subspace basis.
    let ortho = {
        let complement = orthonormal_complement(basis, d);
        if complement.len() != d - m {
            return Err(Error::NonGenericProjection);
        }
        orthonormal_complement(&complement, d)
    };
    let project = |v: &DVector<f64>| -> DVector<f64> {
        DVector::from_iterator(m, ortho.iter().map(|q| q.dot(v)))
    };
    let projected: Vec<DVector<f64>> = p.vertices().points().iter().map(&project).collect();
    // Genericity: distinct projected vertices.
    for i in 0..projected.len() {
        for j in i + 1..projected.len() {
            if (&projected[i] - &projected[j]).norm() <= PROJ_TOL {
                return Err(Error::NonGenericProjection);
            }
        }
    }
    // Genericity: no facet normal orthogonal to the subspace.
    for plane in p.planes() {
        let proj_norm = ortho.iter().map(|q| q.dot(&plane.normal).powi(2)).sum::<f64>().sqrt();
        if proj_norm <= PROJ_TOL {
            return Err(Error::NonGenericProjection);
        }
    }

    // Supporting sets of the projected polytope's facets: vertex sets lying
    // on a common supporting hyperplane of pi(P).
    let face_vertex_sets: Vec<Vec<usize>> = if m == 1 {
        let vals: Vec<f64> = projected.iter().map(|y| y[0]).collect();
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        vec![
            (0..vals.len()).filter(|&i| vals[i] - min <= PROJ_TOL).collect(),
            (0..vals.len()).filter(|&i| max - vals[i] <= PROJ_TOL).collect(),
        ]
    } else {
        let shadow_hull =
            Polytope::convex_hull(&PointConfiguration::new(m, projected.clone()))
                .map_err(|_| Error::NonGenericProjection)?;
        shadow_hull
            .planes()
            .iter()
            .map(|plane| {
                (0..projected.len())
                    .filter(|&i| (plane.normal.dot(&projected[i]) - plane.offset).abs() <= PROJ_TOL)
                    .collect()
            })
            .collect()
    };

    // A face of dP lies in the shadow boundary iff its projection sits in one
    // supporting hyperplane of pi(P); the union over facets of pi(P) of the
    // induced subcomplexes on their supporting vertex sets is exactly that.
    let bc = p.boundary_complex();
    let mut pieces: Vec<Vec<u32>> = Vec::new();
    for vs in face_vertex_sets {
        let w: Vec<u32> = vs.iter().map(|&i| i as u32).collect();
        let induced = bc.induced(&w)?;
        pieces.extend(induced.facets().iter().map(|f| f.vertices().to_vec()));
    }
    Ok(SimplicialComplex::from_facets(pieces))
}

/// Cap geometry for witness strips: caps of chordal radius 11 sqrt(eps)
/// around each center, each carrying a (d-k)-dimensional affine subspace
/// through the cap center inside the cap hyperplane.
#[derive(Clone, Debug)]
pub struct CapSubspace {
    pub center: DVector<f64>,
    /// Hyperplane offset: the cap plane is <center, y> = offset.
    pub offset: f64,
    /// Point the subspace passes through (the cap's spherical center lifted
    /// to the plane).
    pub through: DVector<f64>,
    /// Orthonormal directions spanning the subspace (all orthogonal to
    /// `center`).
    pub directions: Vec<DVector<f64>>,
}

/// Builds the affine subspaces L_x for each cap center; the cap boundary
/// sits at chordal distance `radius_factor * sqrt(eps)` from the center x
/// (default factor 11).
pub fn cap_subspaces(
    caps: &[DVector<f64>],
    eps: f64,
    k: usize,
    seed: u64,
    radius_factor: f64,
) -> Result<Vec<CapSubspace>> {
    if caps.is_empty() {
        return Err(Error::InfeasibleCaps("no cap centers".into()));
    }
    let d = caps[0].len();
    if k < 1 || k > d - 1 {
        return Err(Error::InfeasibleCaps(format!("k={k} out of range for d={d}")));
    }
    let chord = radius_factor * eps.sqrt();
    let offset = 1.0 - chord * chord / 2.0;
    if !(offset > 0.0 && offset < 1.0) {
        return Err(Error::InfeasibleCaps(format!(
            "cap radius {radius_factor}*sqrt(eps) = {chord:.4} does not cut a proper cap"
        )));
    }
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xCAB5);
    let mut out = Vec::with_capacity(caps.len());
    for x in caps {
        // Random (d-k)-frame orthogonal to x.
        let mut frame: Vec<DVector<f64>> = vec![x.clone()];
        let mut directions = Vec::with_capacity(d - k);
        while directions.len() < d - k {
            let mut g: DVector<f64> =
                DVector::from_iterator(d, (0..d).map(|_| StandardNormal.sample(&mut rng)));
            for _ in 0..2 {
                for b in &frame {
                    let c = b.dot(&g) / b.norm_squared();
                    g -= b * c;
                }
            }
            let n = g.norm();
            if n > 1e-8 {
                let g = g / n;
                frame.push(g.clone());
                directions.push(g);
            }
        }
        out.push(CapSubspace {
            center: x.clone(),
            offset,
            through: x * offset,
            directions,
        });
    }
    Ok(out)
}

/// W_x: all vertices of P lying in a facet that intersects the affine
/// subspace L_x. Intersection is decided by LP feasibility per facet, after a
/// cheap slab prefilter on the cap hyperplane.
pub fn strip_vertex_sets(p: &Polytope, subspaces: &[CapSubspace]) -> Result<Vec<Vec<usize>>> {
    let max_norm = p
        .vertices()
        .points()
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max);
    if max_norm > 1.0 + 1e-9 {
        return Err(Error::InvalidPolytope(format!(
            "strip harvesting needs P inscribed in the unit ball (max |v| = {max_norm})"
        )));
    }
    let mut strips = Vec::with_capacity(subspaces.len());
    for cap in subspaces {
        let mut strip: std::collections::BTreeSet<usize> = Default::default();
        for facet in p.facets() {
            // The subspace lies in the hyperplane <x, y> = offset, so a facet
            // must straddle that plane to meet it.
            let heights: Vec<f64> =
                facet.iter().map(|&v| cap.center.dot(p.vertices().point(v))).collect();
            let lo = heights.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if lo > cap.offset + PROJ_TOL || hi < cap.offset - PROJ_TOL {
                continue;
            }
            let pts: Vec<DVector<f64>> =
                facet.iter().map(|&v| p.vertices().point(v).clone()).collect();
            if face_meets_affine_subspace(&pts, &cap.through, &cap.directions, 1e-9) {
                strip.extend(facet.iter().copied());
            }
        }
        strips.push(strip.into_iter().collect());
    }
    Ok(strips)
}
