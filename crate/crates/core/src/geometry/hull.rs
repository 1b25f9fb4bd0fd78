//! Incremental (beneath-beyond) convex hull for low dimensions, with cached
//! facet planes for fast orientation tests and an exact-sign determinant
//! fallback when a floating test is too close to zero to trust.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::exact::exact_det_sign;

/// Floating orientation values closer to zero than this (after scaling) are
/// re-decided exactly.
const ORIENT_GUARD: f64 = 1e-10;

/// Raw hull output: facets as index sets into the input point slice.
#[derive(Clone, Debug)]
pub struct HullFacet {
    /// Input-point indices, sorted.
    pub vertices: Vec<usize>,
    /// Outward unit normal.
    pub normal: DVector<f64>,
    /// Offset of the supporting hyperplane: <normal, x> = offset on the facet.
    pub offset: f64,
}

#[derive(Clone, Debug)]
struct Facet {
    /// Point indices in an order consistent with `normal` (orientation
    /// matters for the exact fallback).
    tuple: Vec<usize>,
    /// Outward cofactor normal (not normalized).
    normal: DVector<f64>,
    /// <normal, tuple[0]>.
    offset: f64,
    /// neighbors[i] = facet across the ridge omitting tuple[i].
    neighbors: Vec<usize>,
    conflicts: Vec<usize>,
    alive: bool,
}

struct Builder<'a> {
    points: &'a [DVector<f64>],
    d: usize,
    facets: Vec<Facet>,
    interior: DVector<f64>,
}

/// Computes the (unnormalized) outward-candidate normal of the hyperplane
/// through the given points: n with <n, p - t0> = det[t1-t0; ...; t_{d-1}-t0; p-t0].
pub(crate) fn cofactor_normal(points: &[DVector<f64>], tuple: &[usize]) -> DVector<f64> {
    let d = points[tuple[0]].len();
    let rows = d - 1;
    let mut n = DVector::zeros(d);
    for j in 0..d {
        // Minor: difference rows with column j removed.
        let mut m = DMatrix::zeros(rows, rows);
        for r in 0..rows {
            let diff = &points[tuple[r + 1]] - &points[tuple[0]];
            let mut cc = 0;
            for c in 0..d {
                if c != j {
                    m[(r, cc)] = diff[c];
                    cc += 1;
                }
            }
        }
        let minor = if rows == 0 { 1.0 } else { m.determinant() };
        let sign = if (rows + j) % 2 == 0 { 1.0 } else { -1.0 };
        n[j] = sign * minor;
    }
    n
}

impl<'a> Builder<'a> {
    /// Signed orientation of point `p` against facet `f`: +1 above (visible),
    /// -1 below. A floating value inside the guard band is re-decided
    /// exactly; an exact zero is a genericity failure.
    fn orient(&self, f: usize, p: usize) -> Result<i32> {
        let facet = &self.facets[f];
        let h = facet.normal.dot(&self.points[p]) - facet.offset;
        let scale = facet.normal.norm()
            * (1.0 + self.points[p].norm() + self.points[facet.tuple[0]].norm());
        if h.abs() > ORIENT_GUARD * scale {
            return Ok(if h > 0.0 { 1 } else { -1 });
        }
        self.orient_exact(&facet.tuple, p)
    }

    fn orient_exact(&self, tuple: &[usize], p: usize) -> Result<i32> {
        let d = self.d;
        // Homogeneous matrix rows (v, 1) for the tuple then p; its determinant
        // equals (-1)^d times the difference determinant.
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
        for &t in tuple.iter().chain(std::iter::once(&p)) {
            let mut row: Vec<f64> = self.points[t].iter().copied().collect();
            row.push(1.0);
            rows.push(row);
        }
        let mut sign = exact_det_sign(&rows);
        if d % 2 == 1 {
            sign = -sign;
        }
        if sign == 0 {
            let mut witness: Vec<usize> = tuple.to_vec();
            witness.push(p);
            witness.sort_unstable();
            return Err(Error::NonGenericInput(witness));
        }
        Ok(sign)
    }

    /// Builds a facet from a tuple, orienting the normal away from the fixed
    /// interior point.
    fn make_facet(&mut self, mut tuple: Vec<usize>) -> Result<usize> {
        let mut normal = cofactor_normal(self.points, &tuple);
        let mut offset = normal.dot(&self.points[tuple[0]]);
        let h = normal.dot(&self.interior) - offset;
        let scale = normal.norm() * (1.0 + self.interior.norm() + self.points[tuple[0]].norm());
        let interior_above = if h.abs() > ORIENT_GUARD * scale {
            h > 0.0
        } else {
            // The fixed interior point should never be near a facet plane of a
            // valid intermediate hull; treat as degenerate if it is.
            return Err(Error::DegenerateInput { rank: self.d - 1, dim: self.d });
        };
        if interior_above {
            tuple.swap(0, 1);
            normal = -normal;
            offset = -offset;
        }
        self.facets.push(Facet {
            tuple,
            normal,
            offset,
            neighbors: vec![usize::MAX; self.d],
            conflicts: Vec::new(),
            alive: true,
        });
        Ok(self.facets.len() - 1)
    }
}

/// Greedy selection of d+1 affinely independent points (maximizing the
/// residual to the current affine span at each step).
fn initial_simplex(points: &[DVector<f64>], d: usize) -> Result<Vec<usize>> {
    let scale = points
        .iter()
        .map(|p| p.amax())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let mut chosen = vec![0usize];
    let mut basis: Vec<DVector<f64>> = Vec::new();
    while chosen.len() < d + 1 {
        let mut best: Option<(f64, usize, DVector<f64>)> = None;
        for (i, p) in points.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let mut v = p - &points[chosen[0]];
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
            let res = v.norm();
            if best.as_ref().is_none_or(|(r, _, _)| res > *r) {
                best = Some((res, i, v));
            }
        }
        let Some((res, i, v)) = best else {
            return Err(Error::DegenerateInput { rank: chosen.len() - 1, dim: d });
        };
        if res <= 1e-12 * scale {
            return Err(Error::DegenerateInput { rank: chosen.len() - 1, dim: d });
        }
        basis.push(v / res);
        chosen.push(i);
    }
    Ok(chosen)
}

/// Computes the convex hull facets of a generic point configuration.
///
/// Errors on flat input and on detected affine dependencies (the offending
/// point subset is reported so callers can re-perturb).
pub fn convex_hull_facets(points: &[DVector<f64>]) -> Result<Vec<HullFacet>> {
    let n = points.len();
    if n == 0 {
        return Err(Error::DegenerateInput { rank: 0, dim: 0 });
    }
    let d = points[0].len();
    if d < 2 {
        return Err(Error::DegenerateInput { rank: 0, dim: d });
    }
    if n < d + 1 {
        return Err(Error::DegenerateInput { rank: n.saturating_sub(1), dim: d });
    }

    let simplex = initial_simplex(points, d)?;
    let interior = {
        let mut c = DVector::zeros(d);
        for &i in &simplex {
            c += &points[i];
        }
        c / (d as f64 + 1.0)
    };
    let mut b = Builder { points, d, facets: Vec::new(), interior };

    // Initial simplex facets: omit one chosen vertex each.
    for omit in 0..=d {
        let tuple: Vec<usize> =
            simplex.iter().enumerate().filter(|&(j, _)| j != omit).map(|(_, &v)| v).collect();
        b.make_facet(tuple)?;
    }
    // Wire simplex adjacency: facet `omit` meets facet `j` across the ridge
    // omitting both chosen vertices.
    for omit in 0..=d {
        for pos in 0..d {
            let v = b.facets[omit].tuple[pos];
            let other = simplex.iter().position(|&s| s == v).unwrap();
            b.facets[omit].neighbors[pos] = other;
        }
    }

    // Initial conflict assignment.
    for p in 0..n {
        if simplex.contains(&p) {
            continue;
        }
        assign_conflict(&mut b, p, 0..=d)?;
    }

    let mut pending: Vec<usize> = (0..=d).filter(|&f| !b.facets[f].conflicts.is_empty()).collect();
    while let Some(f) = pending.pop() {
        if !b.facets[f].alive || b.facets[f].conflicts.is_empty() {
            continue;
        }
        // Furthest conflict point (ties resolved by smallest index).
        let p = {
            let facet = &b.facets[f];
            *facet
                .conflicts
                .iter()
                .max_by(|&&a, &&c| {
                    let ha = facet.normal.dot(&b.points[a]);
                    let hc = facet.normal.dot(&b.points[c]);
                    ha.partial_cmp(&hc).unwrap().then(c.cmp(&a))
                })
                .unwrap()
        };

        // BFS for the visible region.
        let mut visible = vec![f];
        let mut seen = std::collections::BTreeSet::from([f]);
        let mut stack = vec![f];
        let mut horizon: Vec<(usize, usize)> = Vec::new(); // (visible facet, position)
        while let Some(g) = stack.pop() {
            for pos in 0..d {
                let h = b.facets[g].neighbors[pos];
                if seen.contains(&h) {
                    continue;
                }
                if b.orient(h, p)? > 0 {
                    seen.insert(h);
                    visible.push(h);
                    stack.push(h);
                } else {
                    horizon.push((g, pos));
                }
            }
        }

        // Build the cone of new facets over the horizon ridges.
        let mut pool: Vec<usize> = Vec::new();
        for &g in &visible {
            b.facets[g].alive = false;
            pool.append(&mut b.facets[g].conflicts);
        }
        pool.sort_unstable();
        pool.dedup();
        pool.retain(|&q| q != p);

        let mut subridge_map: std::collections::BTreeMap<Vec<usize>, (usize, usize)> =
            std::collections::BTreeMap::new();
        let mut new_ids = Vec::with_capacity(horizon.len());
        for &(g, pos) in &horizon {
            let ridge: Vec<usize> = b.facets[g]
                .tuple
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pos)
                .map(|(_, &v)| v)
                .collect();
            let outside = b.facets[g].neighbors[pos];
            let mut tuple = ridge.clone();
            tuple.push(p);
            let id = b.make_facet(tuple)?;
            new_ids.push(id);
            // Across the ridge opposite p sits the old hidden neighbor.
            let p_pos = b.facets[id].tuple.iter().position(|&v| v == p).unwrap();
            b.facets[id].neighbors[p_pos] = outside;
            // Fix the hidden neighbor's back-pointer: the position of its
            // vertex not on the ridge.
            let back = (0..d)
                .find(|&i| {
                    let v = b.facets[outside].tuple[i];
                    !ridge.contains(&v)
                })
                .expect("hidden neighbor shares the ridge");
            b.facets[outside].neighbors[back] = id;
            // Sub-ridges (ridge minus one vertex, plus p) pair up new facets.
            for &x in &ridge {
                let mut key: Vec<usize> = ridge.iter().copied().filter(|&v| v != x).collect();
                key.sort_unstable();
                let x_pos = b.facets[id].tuple.iter().position(|&v| v == x).unwrap();
                if let Some((other_id, other_pos)) = subridge_map.remove(&key) {
                    b.facets[id].neighbors[x_pos] = other_id;
                    b.facets[other_id].neighbors[other_pos] = id;
                } else {
                    subridge_map.insert(key, (id, x_pos));
                }
            }
        }
        debug_assert!(subridge_map.is_empty(), "horizon sub-ridges must pair up");

        for q in pool {
            assign_conflict(&mut b, q, new_ids.iter().copied())?;
        }
        for &id in &new_ids {
            if !b.facets[id].conflicts.is_empty() {
                pending.push(id);
            }
        }
    }

    let mut out: Vec<HullFacet> = b
        .facets
        .iter()
        .filter(|f| f.alive)
        .map(|f| {
            let mut vertices = f.tuple.clone();
            vertices.sort_unstable();
            let norm = f.normal.norm();
            HullFacet { vertices, normal: &f.normal / norm, offset: f.offset / norm }
        })
        .collect();
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(out)
}

/// Assigns point `p` to the conflict list of the candidate facet it is
/// furthest above, deciding near-zero heights exactly.
fn assign_conflict(
    b: &mut Builder<'_>,
    p: usize,
    candidates: impl IntoIterator<Item = usize>,
) -> Result<()> {
    let mut best: Option<(f64, usize)> = None;
    let mut borderline: Vec<usize> = Vec::new();
    for f in candidates {
        if !b.facets[f].alive {
            continue;
        }
        let facet = &b.facets[f];
        let h = facet.normal.dot(&b.points[p]) - facet.offset;
        let scale = facet.normal.norm()
            * (1.0 + b.points[p].norm() + b.points[facet.tuple[0]].norm());
        if h > ORIENT_GUARD * scale {
            let rel = h / facet.normal.norm();
            if best.as_ref().is_none_or(|(r, _)| rel > *r) {
                best = Some((rel, f));
            }
        } else if h.abs() <= ORIENT_GUARD * scale {
            borderline.push(f);
        }
    }
    if best.is_none() {
        for f in borderline {
            let tuple = b.facets[f].tuple.clone();
            if b.orient_exact(&tuple, p)? > 0 {
                best = Some((0.0, f));
                break;
            }
        }
    }
    if let Some((_, f)) = best {
        b.facets[f].conflicts.push(p);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(vals: &[f64]) -> DVector<f64> {
        DVector::from_vec(vals.to_vec())
    }

    #[test]
    fn square_hull_in_2d() {
        let pts = vec![
            v(&[0.0, 0.0]),
            v(&[1.0, 0.1]),
            v(&[0.9, 1.0]),
            v(&[-0.1, 0.9]),
            v(&[0.5, 0.5]), // interior
        ];
        let facets = convex_hull_facets(&pts).unwrap();
        assert_eq!(facets.len(), 4);
        assert!(facets.iter().all(|f| !f.vertices.contains(&4)));
    }

    #[test]
    fn simplex_hull_in_3d() {
        let pts = vec![
            v(&[0.0, 0.0, 0.0]),
            v(&[1.0, 0.0, 0.0]),
            v(&[0.0, 1.0, 0.0]),
            v(&[0.0, 0.0, 1.0]),
        ];
        let facets = convex_hull_facets(&pts).unwrap();
        assert_eq!(facets.len(), 4);
        // Outward normals: interior centroid strictly below every plane.
        let c = v(&[0.25, 0.25, 0.25]);
        for f in &facets {
            assert!(f.normal.dot(&c) < f.offset - 1e-12);
        }
    }

    #[test]
    fn octahedron_hull() {
        let mut pts = Vec::new();
        for i in 0..3 {
            for s in [1.0, -1.0] {
                let mut p = vec![0.0; 3];
                p[i] = s;
                pts.push(v(&p));
            }
        }
        // Tiny deterministic perturbation to break the degenerate ties.
        for (i, p) in pts.iter_mut().enumerate() {
            for j in 0..3 {
                p[j] += 1e-6 * ((i * 3 + j + 1) as f64).sin();
            }
        }
        let facets = convex_hull_facets(&pts).unwrap();
        assert_eq!(facets.len(), 8);
    }

    #[test]
    fn degenerate_flat_input() {
        let pts = vec![
            v(&[0.0, 0.0, 0.0]),
            v(&[1.0, 0.0, 0.0]),
            v(&[0.0, 1.0, 0.0]),
            v(&[1.0, 1.0, 0.0]),
        ];
        assert!(matches!(
            convex_hull_facets(&pts),
            Err(Error::DegenerateInput { .. })
        ));
    }

    #[test]
    fn non_generic_input_is_reported() {
        // Five points in R^3 with four of them exactly coplanar, and the
        // plane not a facet avoided by perturbation: a square face forces an
        // affinely dependent 4-subset meeting a facet test.
        let pts = vec![
            v(&[0.0, 0.0, 0.0]),
            v(&[1.0, 0.0, 0.0]),
            v(&[0.0, 1.0, 0.0]),
            v(&[1.0, 1.0, 0.0]),
            v(&[0.5, 0.5, 1.0]),
        ];
        match convex_hull_facets(&pts) {
            Err(Error::NonGenericInput(w)) => assert!(w.len() == 4 || w.len() == 5),
            other => panic!("expected NonGenericInput, got {other:?}"),
        }
    }

    #[test]
    fn cube_with_interior_points() {
        let mut pts = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    pts.push(v(&[x, y, z]));
                }
            }
        }
        for (i, p) in pts.iter_mut().enumerate() {
            for j in 0..3 {
                p[j] += 1e-5 * ((7 * i + j + 1) as f64).cos();
            }
        }
        pts.push(v(&[0.5, 0.5, 0.5]));
        pts.push(v(&[0.4, 0.6, 0.5]));
        let facets = convex_hull_facets(&pts).unwrap();
        // A simplicial 3-polytope with 8 vertices has 12 facets.
        assert_eq!(facets.len(), 12);
        assert!(facets.iter().all(|f| f.vertices.iter().all(|&i| i < 8)));
    }
}
