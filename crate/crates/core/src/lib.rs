//! Combinatorial, homological, metric, and rigidity-theoretic machinery for
//! simplicial polytopes: f/h/g-vectors and M-sequences, reduced rational
//! homology, convex hulls and Hausdorff distances to round bodies, stress
//! spaces, and an experiment harness tying them together.

pub mod complex;
pub mod enumeration;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod harness;
pub mod homology;
pub mod linalg;
pub mod stress;

pub use error::{Error, Result};
