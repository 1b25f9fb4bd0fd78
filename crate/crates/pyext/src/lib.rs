//! Python bindings: simplicial complexes, f/h/g-vectors, Macaulay shadows,
//! polytope generators, hulls, Hausdorff distances, and stress dimensions.

use nalgebra::DVector;
use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gstress::complex::{is_stacked_2sphere, Face, SimplicialComplex};
use gstress::enumeration;
use gstress::generators;
use gstress::geometry::{self, PointConfiguration, Polytope};
use gstress::homology;
use gstress::stress;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// An abstract simplicial complex given by its facets.
#[pyclass(name = "Complex")]
struct PyComplex {
    inner: SimplicialComplex,
}

#[pymethods]
impl PyComplex {
    #[new]
    fn new(facets: Vec<Vec<u32>>) -> Self {
        PyComplex { inner: SimplicialComplex::from_facets(facets) }
    }

    fn dim(&self) -> i64 {
        self.inner.dim()
    }

    fn facets(&self) -> Vec<Vec<u32>> {
        self.inner.facets().iter().map(|f| f.vertices().to_vec()).collect()
    }

    fn vertices(&self) -> Vec<u32> {
        self.inner.vertex_set().to_vec()
    }

    /// Face counts (f_-1, f_0, ..., f_dim).
    fn f_vector(&self) -> Vec<u64> {
        self.inner.face_counts().to_vec()
    }

    /// Reduced Betti numbers (beta_-1, beta_0, ..., beta_dim) over Q.
    fn betti(&self) -> Vec<u64> {
        homology::betti(&self.inner).values().to_vec()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn link(&self, face: Vec<u32>) -> PyResult<PyComplex> {
        Ok(PyComplex { inner: self.inner.link(&Face::new(face)).map_err(err)? })
    }

    fn induced(&self, vertices: Vec<u32>) -> PyResult<PyComplex> {
        Ok(PyComplex { inner: self.inner.induced(&vertices).map_err(err)? })
    }

    fn skeleton(&self, i: i64) -> PyComplex {
        PyComplex { inner: self.inner.skeleton(i) }
    }

    fn is_stacked_2sphere(&self) -> PyResult<bool> {
        is_stacked_2sphere(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Complex(dim={}, facets={})", self.inner.dim(), self.inner.facets().len())
    }
}

/// A simplicial polytope: vertex coordinates plus facet structure.
#[pyclass(name = "Polytope")]
struct PyPolytope {
    inner: Polytope,
}

#[pymethods]
impl PyPolytope {
    /// Convex hull of a point list.
    #[staticmethod]
    fn hull(points: Vec<Vec<f64>>) -> PyResult<Self> {
        if points.is_empty() {
            return Err(PyValueError::new_err("no points"));
        }
        let d = points[0].len();
        if points.iter().any(|p| p.len() != d) {
            return Err(PyValueError::new_err("inconsistent point dimensions"));
        }
        let cfg = PointConfiguration::from_rows(d, points);
        Ok(PyPolytope { inner: Polytope::convex_hull(&cfg).map_err(err)? })
    }

    #[staticmethod]
    fn simplex(d: usize) -> PyResult<Self> {
        Ok(PyPolytope { inner: generators::simplex_polytope(d).map_err(err)? })
    }

    #[staticmethod]
    fn cross(d: usize) -> PyResult<Self> {
        Ok(PyPolytope { inner: generators::cross_polytope(d).map_err(err)? })
    }

    #[staticmethod]
    fn cyclic(n: usize, d: usize) -> PyResult<Self> {
        Ok(PyPolytope { inner: generators::cyclic_polytope(n, d).map_err(err)? })
    }

    #[staticmethod]
    fn stacked(d: usize, steps: usize, seed: u64) -> PyResult<Self> {
        Ok(PyPolytope { inner: generators::stacked_polytope(d, steps, seed).map_err(err)? })
    }

    #[staticmethod]
    fn sphere_uniform(n: usize, d: usize, seed: u64) -> PyResult<Self> {
        Ok(PyPolytope { inner: generators::sphere_uniform_polytope(n, d, seed).map_err(err)? })
    }

    #[staticmethod]
    fn net_hull(spacing: f64, d: usize, seed: u64) -> PyResult<Self> {
        Ok(PyPolytope { inner: generators::net_hull(spacing, d, seed).map_err(err)? })
    }

    fn d(&self) -> usize {
        self.inner.d()
    }

    fn vertices(&self) -> Vec<Vec<f64>> {
        self.inner
            .vertices()
            .points()
            .iter()
            .map(|p| p.iter().copied().collect())
            .collect()
    }

    fn facets(&self) -> Vec<Vec<usize>> {
        self.inner.facets().to_vec()
    }

    fn boundary_complex(&self) -> PyComplex {
        PyComplex { inner: self.inner.boundary_complex() }
    }

    fn f_vector(&self) -> Vec<u64> {
        self.inner.boundary_complex().face_counts().to_vec()
    }

    /// h-vector of the boundary complex.
    fn h_vector(&self) -> Vec<BigInt> {
        let f = enumeration::FaceVector::of_complex(&self.inner.boundary_complex());
        enumeration::h_from_f(&f).entries().to_vec()
    }

    /// g-vector (g_0 .. g_{floor(d/2)}).
    fn g_vector(&self) -> Vec<BigInt> {
        let f = enumeration::FaceVector::of_complex(&self.inner.boundary_complex());
        enumeration::g_from_h(&enumeration::h_from_f(&f)).entries().to_vec()
    }

    fn support(&self, direction: Vec<f64>) -> PyResult<f64> {
        if direction.len() != self.inner.d() {
            return Err(PyValueError::new_err("direction of wrong dimension"));
        }
        Ok(self.inner.support(&DVector::from_vec(direction)))
    }

    fn longest_edge(&self) -> f64 {
        self.inner.longest_edge()
    }

    fn hausdorff_to_ball(&self) -> PyResult<f64> {
        geometry::hausdorff_to_ball(&self.inner).map_err(err)
    }

    /// Affine k-stress dimension (floating and exact backends must agree).
    fn stress_dim(&self, k: usize) -> PyResult<usize> {
        let bc = self.inner.boundary_complex();
        let coords = self.inner.vertices().points().to_vec();
        stress::affine_stress_dim_checked(&bc, &coords, k).map_err(err)
    }

    /// Classical stress-space dimension of the 1-skeleton framework.
    fn graph_stress_dim(&self) -> PyResult<usize> {
        let fw = stress::Framework::from_polytope_graph(&self.inner);
        stress::stress_dim_checked(&fw).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyPolytope { inner: Polytope::from_text(text).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!(
            "Polytope(d={}, vertices={}, facets={})",
            self.inner.d(),
            self.inner.n_vertices(),
            self.inner.facets().len()
        )
    }
}

/// Macaulay shadow function applied to the k-th representation of n.
#[pyfunction]
fn shadow(k: u64, n: BigInt) -> PyResult<BigInt> {
    if k < 1 {
        return Err(PyValueError::new_err("k must be >= 1"));
    }
    if n < BigInt::from(0) {
        return Err(PyValueError::new_err("n must be >= 0"));
    }
    Ok(enumeration::shadow(k, &n))
}

/// Macaulay pseudopower n^<k>.
#[pyfunction]
fn pseudopower(n: BigInt, k: u64) -> PyResult<BigInt> {
    if k < 1 {
        return Err(PyValueError::new_err("k must be >= 1"));
    }
    if n < BigInt::from(0) {
        return Err(PyValueError::new_err("n must be >= 0"));
    }
    Ok(enumeration::pseudopower(&n, k))
}

/// M-sequence predicate on a candidate g-vector.
#[pyfunction]
fn is_m_sequence(g: Vec<BigInt>) -> bool {
    if g.is_empty() {
        return false;
    }
    enumeration::is_m_sequence(&enumeration::GVector::new(g))
}

/// h-vector from face counts (f_-1, f_0, ..., f_{d-1}).
#[pyfunction]
fn h_from_f(f: Vec<BigInt>) -> PyResult<Vec<BigInt>> {
    if f.is_empty() || f[0] != BigInt::from(1) {
        return Err(PyValueError::new_err("face vector must start with f_-1 = 1"));
    }
    Ok(enumeration::h_from_f(&enumeration::FaceVector::new(f)).entries().to_vec())
}

#[pymodule]
fn gstress_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_class::<PyPolytope>()?;
    m.add_function(wrap_pyfunction!(shadow, m)?)?;
    m.add_function(wrap_pyfunction!(pseudopower, m)?)?;
    m.add_function(wrap_pyfunction!(is_m_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(h_from_f, m)?)?;
    Ok(())
}
