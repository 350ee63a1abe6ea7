//! Quadrature on polygons and segments, orthonormal polynomial bases and
//! `L²` projectors.

mod basis;
mod projection;
mod quadrature;

pub use basis::{dim_cell, exponents, inertial_frame, CellBasis, EdgeBasis};
pub use projection::{
    check_spd, edge_normal_flux_matrix, l2_project_cell, l2_project_edge, l2_project_with,
    stiffness_with, weighted_stiffness, PROJECTION_EXTRA,
};
pub use quadrature::{
    cell_quadrature, edge_quadrature, gauss_legendre, polygon_quadrature, segment_quadrature,
    triangle_quadrature, QuadRule,
};
