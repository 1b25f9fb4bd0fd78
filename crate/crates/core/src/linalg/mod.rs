//! Numeric backends: exact rational elimination and floating SVD kernels,
//! plus a small feasibility LP.

pub mod exact;
pub mod float;
pub mod lp;
