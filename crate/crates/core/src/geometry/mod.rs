//! Point configurations, convex hulls and their boundary complexes, support
//! values, Hausdorff distances to balls and ellipsoids, projections, and
//! shadow-boundary machinery.

pub mod hull;
pub mod shadow;

use std::collections::BTreeSet;

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::exact::exact_det_sign;

/// A finite point configuration in R^d.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfiguration {
    d: usize,
    points: Vec<DVector<f64>>,
}

impl PointConfiguration {
    pub fn new(d: usize, points: Vec<DVector<f64>>) -> Self {
        assert!(points.iter().all(|p| p.len() == d && p.iter().all(|x| x.is_finite())));
        PointConfiguration { d, points }
    }

    pub fn from_rows(d: usize, rows: Vec<Vec<f64>>) -> Self {
        Self::new(d, rows.into_iter().map(DVector::from_vec).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[DVector<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &DVector<f64> {
        &self.points[i]
    }
}

/// A supporting hyperplane <normal, x> = offset with unit outward normal.
#[derive(Clone, Debug)]
pub struct FacetPlane {
    pub normal: DVector<f64>,
    pub offset: f64,
}

/// A simplicial polytope: hull vertices, facet vertex-index sets, and facet
/// hyperplanes.
#[derive(Clone, Debug)]
pub struct Polytope {
    vertices: PointConfiguration,
    facets: Vec<Vec<usize>>,
    planes: Vec<FacetPlane>,
}

impl Polytope {
    /// Convex hull of a point configuration; requires generic position (an
    /// affine dependency among d+1 hull-relevant points is an error).
    pub fn convex_hull(pts: &PointConfiguration) -> Result<Polytope> {
        let raw = hull::convex_hull_facets(pts.points())?;
        // Re-index onto the hull vertices only, preserving input order.
        let used: BTreeSet<usize> = raw.iter().flat_map(|f| f.vertices.iter().copied()).collect();
        let old_to_new: std::collections::BTreeMap<usize, usize> =
            used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let vertices = PointConfiguration::new(
            pts.d(),
            used.iter().map(|&i| pts.point(i).clone()).collect(),
        );
        let mut facets: Vec<Vec<usize>> = Vec::with_capacity(raw.len());
        let mut planes = Vec::with_capacity(raw.len());
        for f in raw {
            facets.push(f.vertices.iter().map(|v| old_to_new[v]).collect());
            planes.push(FacetPlane { normal: f.normal, offset: f.offset });
        }
        Ok(Polytope { vertices, facets, planes })
    }

    pub fn d(&self) -> usize {
        self.vertices.d()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &PointConfiguration {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn planes(&self) -> &[FacetPlane] {
        &self.planes
    }

    /// The boundary complex as an abstract simplicial complex, vertex i of
    /// the complex being vertex i of the polytope.
    pub fn boundary_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_facets(
            self.facets.iter().map(|f| f.iter().map(|&v| v as u32).collect::<Vec<_>>()),
        )
    }

    /// Support value c(u, P) = max over vertices of <u, v>.
    pub fn support(&self, u: &DVector<f64>) -> f64 {
        self.vertices
            .points()
            .iter()
            .map(|v| u.dot(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Edges of the 1-skeleton (all vertex pairs inside facets).
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for i in 0..f.len() {
                for j in i + 1..f.len() {
                    out.insert((f[i].min(f[j]), f[i].max(f[j])));
                }
            }
        }
        out
    }

    /// Maximum Euclidean edge length over the 1-skeleton.
    pub fn longest_edge(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&(a, b)| (self.vertices.point(a) - self.vertices.point(b)).norm())
            .fold(0.0, f64::max)
    }

    /// Image under a nonsingular linear map; the combinatorics is kept and
    /// the facet planes are recomputed.
    pub fn linear_image(&self, t: &DMatrix<f64>) -> Result<Polytope> {
        let pts = PointConfiguration::new(
            self.d(),
            self.vertices.points().iter().map(|p| t * p).collect(),
        );
        Polytope::from_parts(pts, self.facets.clone())
    }

    /// Rebuilds a polytope from vertices plus facet index sets, recomputing
    /// outward planes (the vertex centroid is taken as interior reference).
    pub fn from_parts(vertices: PointConfiguration, facets: Vec<Vec<usize>>) -> Result<Polytope> {
        let d = vertices.d();
        let mut centroid = DVector::zeros(d);
        for p in vertices.points() {
            centroid += p;
        }
        centroid /= vertices.len() as f64;
        let mut planes = Vec::with_capacity(facets.len());
        for f in &facets {
            if f.len() != d {
                return Err(Error::InvalidPolytope(format!(
                    "facet {f:?} does not have {d} vertices"
                )));
            }
            let mut n = hull::cofactor_normal(vertices.points(), f);
            let norm = n.norm();
            if !(norm > 0.0) {
                return Err(Error::InvalidPolytope(format!("degenerate facet {f:?}")));
            }
            n /= norm;
            let mut c = n.dot(vertices.point(f[0]));
            if n.dot(&centroid) > c {
                n = -n;
                c = -c;
            }
            planes.push(FacetPlane { normal: n, offset: c });
        }
        Ok(Polytope { vertices, facets, planes })
    }

    /// Checks the polytope invariants: every vertex on at least d facet
    /// planes, every non-facet vertex strictly inside each plane, and every
    /// ridge shared by exactly two facets.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let d = self.d();
        let n = self.n_vertices();
        let mut incident = vec![0usize; n];
        for (f, plane) in self.facets.iter().zip(&self.planes) {
            for v in 0..n {
                let h = plane.normal.dot(self.vertices.point(v)) - plane.offset;
                if h.abs() <= tol {
                    incident[v] += 1;
                } else if h > 0.0 {
                    return Err(Error::InvalidPolytope(format!(
                        "vertex {v} lies outside facet {f:?} by {h:.3e}"
                    )));
                } else if f.contains(&v) {
                    return Err(Error::InvalidPolytope(format!(
                        "vertex {v} off its own facet plane {f:?} by {h:.3e}"
                    )));
                }
            }
        }
        if let Some(v) = (0..n).find(|&v| incident[v] < d) {
            return Err(Error::InvalidPolytope(format!(
                "vertex {v} lies on only {} facet planes",
                incident[v]
            )));
        }
        let mut ridge_count: std::collections::BTreeMap<Vec<usize>, usize> = Default::default();
        for f in &self.facets {
            for skip in 0..f.len() {
                let mut r = f.clone();
                r.remove(skip);
                *ridge_count.entry(r).or_insert(0) += 1;
            }
        }
        if ridge_count.values().any(|&c| c != 2) {
            return Err(Error::InvalidPolytope("a ridge is not shared by exactly 2 facets".into()));
        }
        Ok(())
    }

    /// Serializes in the polytope text format: `d n_vertices`, coordinate
    /// lines, `n_facets`, facet index lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.d(), self.n_vertices());
        for p in self.vertices.points() {
            let coords: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
        out.push_str(&format!("{}\n", self.facets.len()));
        for f in &self.facets {
            let idx: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            out.push_str(&idx.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Polytope> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty polytope file".into()))?;
        let mut parts = header.split_whitespace();
        let d: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad polytope header".into()))?;
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad polytope header".into()))?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse("missing coordinate line".into()))?;
            let row: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(|t| t.parse()).collect();
            let row = row.map_err(|e| Error::Parse(format!("bad coordinate: {e}")))?;
            if row.len() != d {
                return Err(Error::Parse("coordinate line of wrong length".into()));
            }
            rows.push(row);
        }
        let nf: usize = lines
            .next()
            .and_then(|l| l.trim().parse().ok())
            .ok_or_else(|| Error::Parse("bad facet count".into()))?;
        let mut facets = Vec::with_capacity(nf);
        for _ in 0..nf {
            let line = lines.next().ok_or_else(|| Error::Parse("missing facet line".into()))?;
            let f: std::result::Result<Vec<usize>, _> =
                line.split_whitespace().map(|t| t.parse()).collect();
            let mut f = f.map_err(|e| Error::Parse(format!("bad facet index: {e}")))?;
            f.sort_unstable();
            facets.push(f);
        }
        Polytope::from_parts(PointConfiguration::from_rows(d, rows), facets)
    }
}

/// A reference convex body: the unit ball or an ellipsoid given by a
/// symmetric positive definite matrix A (the body { x : x^T A^{-1} x <= 1 },
/// i.e. the image of the unit ball under A^{1/2}).
#[derive(Clone, Debug)]
pub enum BodySpec {
    UnitBall { d: usize },
    Ellipsoid { a: DMatrix<f64> },
}

impl BodySpec {
    pub fn unit_ball(d: usize) -> Self {
        BodySpec::UnitBall { d }
    }

    /// Validates symmetry and positive definiteness (via Cholesky).
    pub fn ellipsoid(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::InvalidBody("ellipsoid matrix must be square".into()));
        }
        let sym_err = (&a - a.transpose()).amax();
        if sym_err > 1e-12 * a.amax().max(1.0) {
            return Err(Error::InvalidBody("ellipsoid matrix must be symmetric".into()));
        }
        if Cholesky::new(a.clone()).is_none() {
            return Err(Error::InvalidBody("ellipsoid matrix must be positive definite".into()));
        }
        Ok(BodySpec::Ellipsoid { a })
    }

    pub fn d(&self) -> usize {
        match self {
            BodySpec::UnitBall { d } => *d,
            BodySpec::Ellipsoid { a } => a.nrows(),
        }
    }

    /// The symmetric map T with body = T(unit ball), together with its
    /// extreme singular values (sigma_min, sigma_max).
    pub fn transform(&self) -> (DMatrix<f64>, f64, f64) {
        match self {
            BodySpec::UnitBall { d } => (DMatrix::identity(*d, *d), 1.0, 1.0),
            BodySpec::Ellipsoid { a } => {
                let eig = a.clone().symmetric_eigen();
                let sqrt_vals: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.sqrt()).collect();
                let q = &eig.eigenvectors;
                let mut s = DMatrix::zeros(a.nrows(), a.ncols());
                for (i, &v) in sqrt_vals.iter().enumerate() {
                    s[(i, i)] = v;
                }
                let t = q * s * q.transpose();
                let min = sqrt_vals.iter().copied().fold(f64::INFINITY, f64::min);
                let max = sqrt_vals.iter().copied().fold(0.0f64, f64::max);
                (t, min, max)
            }
        }
    }
}

/// Closed-form Hausdorff distance from a polytope with the origin strictly
/// interior to the closed unit ball:
/// max(1 - min_F d(0, aff F), max_v |v| - 1).
pub fn hausdorff_to_ball(p: &Polytope) -> Result<f64> {
    let min_plane = p
        .planes()
        .iter()
        .map(|pl| pl.offset)
        .fold(f64::INFINITY, f64::min);
    if min_plane <= 0.0 {
        return Err(Error::OriginNotInterior);
    }
    let max_norm = p
        .vertices
        .points()
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max);
    Ok((1.0 - min_plane).max(max_norm - 1.0).max(0.0))
}

/// Certified interval for the Hausdorff distance to a body: exact for the
/// unit ball, and for an ellipsoid T(B) the pullback distance scaled by the
/// extreme singular values of T.
pub fn hausdorff_to_body(p: &Polytope, body: &BodySpec) -> Result<(f64, f64)> {
    match body {
        BodySpec::UnitBall { .. } => {
            let d = hausdorff_to_ball(p)?;
            Ok((d, d))
        }
        BodySpec::Ellipsoid { .. } => {
            let (t, smin, smax) = body.transform();
            let t_inv = t
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::InvalidBody("singular transform".into()))?;
            let pulled = p.linear_image(&t_inv)?;
            let d0 = hausdorff_to_ball(&pulled)?;
            Ok((smin * d0, smax * d0))
        }
    }
}

/// Number of (d+1)-subsets up to which genericity is certified exhaustively.
const GENERICITY_CERT_CAP: u64 = 100_000;

/// Deterministically perturbs a configuration into general position. For
/// small inputs every (d+1)-subset is certified affinely independent (with
/// reseeded retries); large inputs rely on downstream exact-sign detection
/// plus caller-side retry.
pub fn perturb_generic(
    pts: &PointConfiguration,
    magnitude: f64,
    seed: u64,
) -> PointConfiguration {
    if magnitude == 0.0 {
        return pts.clone();
    }
    let n = pts.len();
    let d = pts.d();
    for attempt in 0..32u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9E3779B97F4A7C15)));
        let moved: Vec<DVector<f64>> = pts
            .points()
            .iter()
            .map(|p| {
                DVector::from_iterator(
                    d,
                    p.iter().map(|&x| x + rng.random_range(-magnitude..magnitude)),
                )
            })
            .collect();
        let cfg = PointConfiguration::new(d, moved);
        if !certifiable(n, d) || is_generic(&cfg) {
            return cfg;
        }
    }
    // Statistically unreachable: each retry fails with probability ~0.
    panic!("perturbation failed to reach general position after 32 attempts");
}

fn certifiable(n: usize, d: usize) -> bool {
    let k = d as u64 + 1;
    let n = n as u64;
    if n < k {
        return true;
    }
    let mut c: u64 = 1;
    for i in 0..k {
        c = c.saturating_mul(n - i) / (i + 1);
        if c > GENERICITY_CERT_CAP {
            return false;
        }
    }
    true
}

/// Exhaustive genericity certificate: every (d+1)-subset affinely
/// independent, with float screening and exact-sign confirmation near zero.
pub fn is_generic(pts: &PointConfiguration) -> bool {
    let d = pts.d();
    let n = pts.len();
    if n < d + 1 {
        return true;
    }
    let idx: Vec<usize> = (0..n).collect();
    subset_scan(&idx, d + 1, &mut |subset| {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
        for &i in subset {
            let mut row: Vec<f64> = pts.point(i).iter().copied().collect();
            row.push(1.0);
            rows.push(row);
        }
        let m = DMatrix::from_fn(d + 1, d + 1, |r, c| rows[r][c]);
        let det = m.determinant();
        let scale: f64 = rows
            .iter()
            .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
            .product();
        if det.abs() > 1e-10 * scale.max(1e-300) {
            true
        } else {
            exact_det_sign(&rows) != 0
        }
    })
}

/// Visits all k-subsets, returning false early when the visitor does.
fn subset_scan(items: &[usize], k: usize, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        items: &[usize],
        k: usize,
        start: usize,
        acc: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if acc.len() == k {
            return visit(acc);
        }
        for i in start..items.len() {
            acc.push(items[i]);
            if !rec(items, k, i + 1, acc, visit) {
                return false;
            }
            acc.pop();
        }
        true
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), visit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular_simplex(d: usize) -> PointConfiguration {
        crate::generators::regular_simplex_points(d)
    }

    #[test]
    fn hull_of_simplex_has_binomial_f_vector() {
        let pts = regular_simplex(3);
        let p = Polytope::convex_hull(&pts).unwrap();
        assert_eq!(p.n_vertices(), 4);
        assert_eq!(p.facets().len(), 4);
        p.validate(1e-9).unwrap();
        let k = p.boundary_complex();
        assert_eq!(k.face_counts(), &[1, 4, 6, 4]);
    }

    #[test]
    fn support_values() {
        let pts = regular_simplex(3);
        let p = Polytope::convex_hull(&pts).unwrap();
        // Support at a vertex direction equals that vertex's norm (vertices
        // on the unit sphere here).
        let v0 = p.vertices().point(0).clone();
        let u = &v0 / v0.norm();
        assert!((p.support(&u) - v0.norm()).abs() < 1e-12);
        // Convexity: support(u) + support(-u) >= 0 with equality iff flat.
        assert!(p.support(&u) + p.support(&(-u.clone())) > 0.0);
    }

    #[test]
    fn hausdorff_of_regular_tetrahedron_is_two_thirds() {
        let pts = regular_simplex(3);
        let p = Polytope::convex_hull(&pts).unwrap();
        let d = hausdorff_to_ball(&p).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-12, "got {d}");
        // Inscribed: the outer term vanishes, delta = 1 - min offset.
        let min_c = p.planes().iter().map(|pl| pl.offset).fold(f64::INFINITY, f64::min);
        assert!((d - (1.0 - min_c)).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_requires_interior_origin() {
        let pts = PointConfiguration::from_rows(
            2,
            vec![
                vec![5.0, 5.0],
                vec![6.0, 5.1],
                vec![5.5, 6.0],
            ],
        );
        let p = Polytope::convex_hull(&pts).unwrap();
        assert!(matches!(hausdorff_to_ball(&p), Err(Error::OriginNotInterior)));
    }

    #[test]
    fn body_interval_unit_ball_is_degenerate() {
        let pts = regular_simplex(3);
        let p = Polytope::convex_hull(&pts).unwrap();
        let (lo, hi) = hausdorff_to_body(&p, &BodySpec::unit_ball(3)).unwrap();
        assert_eq!(lo, hi);
        assert!((lo - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ellipsoid_identity_gives_zero_width() {
        let pts = regular_simplex(3);
        let p = Polytope::convex_hull(&pts).unwrap();
        let body = BodySpec::ellipsoid(DMatrix::identity(3, 3)).unwrap();
        let (lo, hi) = hausdorff_to_body(&p, &body).unwrap();
        assert!((lo - hi).abs() < 1e-12);
    }

    #[test]
    fn ellipsoid_validation() {
        let mut m = DMatrix::identity(3, 3);
        m[(0, 1)] = 0.5;
        assert!(BodySpec::ellipsoid(m).is_err());
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -2.0, 1.0]));
        assert!(BodySpec::ellipsoid(m).is_err());
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0, 1.0]));
        let body = BodySpec::ellipsoid(m).unwrap();
        let (t, smin, smax) = body.transform();
        assert!((t[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((smin - 1.0).abs() < 1e-12);
        assert!((smax - 2.0).abs() < 1e-12);
    }

    #[test]
    fn longest_edge_of_regular_tetra_and_scaling() {
        let pts = regular_simplex(3);
        let p = Polytope::convex_hull(&pts).unwrap();
        let expected = (8.0f64 / 3.0).sqrt();
        assert!((p.longest_edge() - expected).abs() < 1e-12);
        let doubled = p.linear_image(&(DMatrix::identity(3, 3) * 2.0)).unwrap();
        assert!((doubled.longest_edge() - 2.0 * expected).abs() < 1e-12);
    }

    #[test]
    fn perturbation_determinism_and_genericity() {
        // Cross-polytope vertices are highly degenerate; perturbation fixes it.
        let mut rows = Vec::new();
        for i in 0..3 {
            for s in [1.0f64, -1.0] {
                let mut r = vec![0.0; 3];
                r[i] = s;
                rows.push(r);
            }
        }
        let pts = PointConfiguration::from_rows(3, rows);
        assert!(!is_generic(&pts));
        let a = perturb_generic(&pts, 1e-6, 7);
        let b = perturb_generic(&pts, 1e-6, 7);
        assert_eq!(a, b);
        assert!(is_generic(&a));
        // Magnitude 0 is the identity.
        assert_eq!(perturb_generic(&pts, 0.0, 7), pts);
        // Already-generic input stays generic under small perturbation.
        let c = perturb_generic(&a, 1e-9, 8);
        assert!(is_generic(&c));
    }

    #[test]
    fn affine_invariance_of_hull_combinatorics() {
        let pts = crate::generators::sphere_uniform_points(12, 3, 42);
        let p = Polytope::convex_hull(&pts).unwrap();
        let mut t = DMatrix::identity(3, 3);
        t[(0, 0)] = 2.0;
        t[(0, 1)] = 0.3;
        t[(2, 1)] = -0.7;
        let mapped = PointConfiguration::new(
            3,
            pts.points().iter().map(|v| &t * v).collect(),
        );
        let q = Polytope::convex_hull(&mapped).unwrap();
        assert_eq!(p.boundary_complex(), q.boundary_complex());
    }

    #[test]
    fn polytope_text_round_trip() {
        let pts = regular_simplex(3);
        let p = Polytope::convex_hull(&pts).unwrap();
        let text = p.to_text();
        let q = Polytope::from_text(&text).unwrap();
        assert_eq!(p.facets(), q.facets());
        assert_eq!(p.vertices(), q.vertices());
        assert_eq!(q.to_text(), text);
    }
}
