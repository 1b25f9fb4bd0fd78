use crate::complex::Face;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("face {0} is not a face of the complex")]
    FaceNotInComplex(Face),
    #[error("vertex {0} is not a vertex of the complex")]
    UnknownVertex(u32),
    #[error("vertex {0} already exists in the complex")]
    VertexCollision(u32),
    #[error("argument is not a subcomplex")]
    NotSubcomplex,
    #[error("expected a simplicial 2-sphere: {0}")]
    NotA2Sphere(String),
    #[error("face enumeration would exceed the materialization cap ({0} faces)")]
    TooManyFaces(u64),
    #[error("subdivided face must have dimension >= 1")]
    FaceTooSmall,

    #[error("degenerate input: points span an affine subspace of dimension {rank} < {dim}")]
    DegenerateInput { rank: usize, dim: usize },
    #[error("non-generic input: points {0:?} are affinely dependent")]
    NonGenericInput(Vec<usize>),
    #[error("non-generic projection subspace; re-randomize and retry")]
    NonGenericProjection,
    #[error("origin is not strictly interior to the polytope")]
    OriginNotInterior,
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("infeasible cap parameters: {0}")]
    InfeasibleCaps(String),
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("degenerate span for face {0}; embedding is not generic")]
    DegenerateSpan(Face),
    #[error("polytope invariant violated: {0}")]
    InvalidPolytope(String),
    #[error("numeric backends disagree: float={float}, exact={exact}")]
    BackendMismatch { float: usize, exact: usize },

    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
