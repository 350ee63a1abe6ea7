//! Per-cell HHO operators.
//!
//! A [`LocalSpace`] collects the tensor-independent integrals of a cell
//! (mass, gradient moments, edge traces and fluxes); every operator for a
//! given constant tensor `K_T` is then a handful of small dense products.

mod operators;
mod space;

pub use operators::{
    build_difference_ops, build_local_bilinear, build_local_operators, build_reconstruction,
    build_stabilization, elliptic_projector, local_energy, local_seminorm, seminorm_matrix,
    seminorm_squared, stabilization_energy, LocalOperatorSet,
};
pub use space::{interpolate_field, interpolate_local, LocalDofVector, LocalEdge, LocalSpace};
