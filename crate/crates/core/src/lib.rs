//! Hybrid High-Order (HHO) discretisation of the anisotropic diffusion problem
//! `-div(K grad u) = f` with Dirichlet data on general polygonal meshes.
//!
//! The crate is split bottom-up:
//!
//! * [`mesh`]: polygonal meshes, file formats, mesh-family generators and the
//!   geometric quantities used by the scheme (`d_TF`, flatness, skew maps);
//! * [`poly`]: quadrature, orthonormal polynomial bases and L² projectors;
//! * [`field`]: scalar fields and piecewise-constant diffusion tensors;
//! * [`local`]: the per-cell HHO operators (elliptic projector, potential
//!   reconstruction, difference operators, stabilisation, local bilinear form);
//! * [`system`]: degrees of freedom, static condensation, sparse solves and
//!   1-norm condition estimates;
//! * [`analysis`]: discrete error norms, transport diagnostics, predicted
//!   bound factors and convergence-rate fitting;
//! * [`cases`]: end-to-end drivers for the benchmark cases and custom runs.

pub mod analysis;
pub mod cases;
pub mod error;
pub mod field;
pub mod local;
pub mod mesh;
pub mod poly;
pub mod system;

pub use error::{HhoError, Result};

/// Points and vectors of the plane.
pub type Point = nalgebra::Vector2<f64>;
/// Constant 2×2 tensors (diffusion tensors, linear maps).
pub type Tensor = nalgebra::Matrix2<f64>;
