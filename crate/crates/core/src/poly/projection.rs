use nalgebra::{DMatrix, DVector};

use super::basis::{CellBasis, EdgeBasis};
use super::quadrature::{cell_quadrature, edge_quadrature, QuadRule};
use crate::mesh::Mesh;
use crate::{HhoError, Point, Result, Tensor};

/// Checks that `k` is symmetric positive definite.
pub fn check_spd(k: &Tensor) -> Result<()> {
    let scale = k.abs().max();
    if (k[(0, 1)] - k[(1, 0)]).abs() > 1e-12 * scale {
        return Err(HhoError::NotSpd(format!("non-symmetric tensor {k:?}")));
    }
    let det = k[(0, 0)] * k[(1, 1)] - k[(0, 1)] * k[(1, 0)];
    if !(k[(0, 0)] > 0.0 && det > 0.0) {
        return Err(HhoError::NotSpd(format!(
            "tensor {k:?} has a nonpositive eigenvalue"
        )));
    }
    Ok(())
}

/// `L²` projection onto the span of `basis` using `rule`.
pub fn l2_project_with(
    basis_eval: impl Fn(&Point, &mut [f64]),
    n: usize,
    rule: &QuadRule,
    f: impl Fn(&Point) -> f64,
) -> Result<DVector<f64>> {
    let mut mass = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    let mut v = vec![0.0; n];
    for (x, w) in rule.points.iter().zip(&rule.weights) {
        basis_eval(x, &mut v);
        let fx = f(x);
        for i in 0..n {
            rhs[i] += w * fx * v[i];
            for j in 0..n {
                mass[(i, j)] += w * v[i] * v[j];
            }
        }
    }
    let chol = mass
        .cholesky()
        .ok_or_else(|| HhoError::SingularLocal("singular mass matrix".into()))?;
    Ok(chol.solve(&rhs))
}

/// Projections onto `P^l` integrate with exactness `2l + PROJECTION_EXTRA`.
pub const PROJECTION_EXTRA: usize = 12;

/// Coefficients of `pi^l_T f` in the first `dim P^l` functions of `basis`.
pub fn l2_project_cell(
    f: impl Fn(&Point) -> f64,
    degree: usize,
    mesh: &Mesh,
    cell: usize,
    basis: &CellBasis,
) -> Result<DVector<f64>> {
    let n = super::dim_cell(degree);
    if n > basis.dim() {
        return Err(HhoError::InvalidInput(format!(
            "basis of degree {} cannot hold P^{degree}",
            basis.degree
        )));
    }
    let rule = cell_quadrature(mesh, cell, 2 * degree + PROJECTION_EXTRA);
    l2_project_with(|x, out| prefix(basis, x, out), n, &rule, f)
}

fn prefix(basis: &CellBasis, x: &Point, out: &mut [f64]) {
    let mut all = [0.0; 64];
    basis.eval_into(x, &mut all[..basis.dim()]);
    out.copy_from_slice(&all[..out.len()]);
}

pub fn l2_project_edge(
    f: impl Fn(&Point) -> f64,
    mesh: &Mesh,
    edge: usize,
    basis: &EdgeBasis,
) -> Result<DVector<f64>> {
    let rule = edge_quadrature(mesh, edge, 2 * basis.degree + PROJECTION_EXTRA);
    l2_project_with(|x, out| basis.eval_into(x, out), basis.dim(), &rule, f)
}

/// `(K grad phi_i, grad psi_j)_T` for `phi` in `a`, `psi` in `b`.
pub fn weighted_stiffness(
    mesh: &Mesh,
    cell: usize,
    k: &Tensor,
    a: &CellBasis,
    b: &CellBasis,
) -> Result<DMatrix<f64>> {
    check_spd(k)?;
    let q = (a.degree + b.degree).max(1);
    let rule = cell_quadrature(mesh, cell, q);
    Ok(stiffness_with(&rule, k, a, b))
}

pub fn stiffness_with(rule: &QuadRule, k: &Tensor, a: &CellBasis, b: &CellBasis) -> DMatrix<f64> {
    let (na, nb) = (a.dim(), b.dim());
    let mut s = DMatrix::zeros(na, nb);
    let mut ga = vec![Point::zeros(); na];
    let mut gb = vec![Point::zeros(); nb];
    for (x, w) in rule.points.iter().zip(&rule.weights) {
        a.grad_into(x, &mut ga);
        b.grad_into(x, &mut gb);
        for i in 0..na {
            let kg = k * ga[i] * *w;
            for j in 0..nb {
                s[(i, j)] += kg.dot(&gb[j]);
            }
        }
    }
    s
}

/// `(mu_i, K grad phi_j . n_TF)_F`.
pub fn edge_normal_flux_matrix(
    mesh: &Mesh,
    cell: usize,
    edge: usize,
    k: &Tensor,
    cell_basis: &CellBasis,
    edge_basis: &EdgeBasis,
) -> Result<DMatrix<f64>> {
    check_spd(k)?;
    let e = &mesh.edges[edge];
    let pos = e
        .cells
        .iter()
        .position(|&c| c == cell)
        .ok_or(HhoError::NotIncident { cell, edge })?;
    let kn = k * e.normals[pos];
    let rule = edge_quadrature(mesh, edge, edge_basis.degree + cell_basis.degree);
    let (ne, nc) = (edge_basis.dim(), cell_basis.dim());
    let mut m = DMatrix::zeros(ne, nc);
    let mut mu = vec![0.0; ne];
    let mut g = vec![Point::zeros(); nc];
    for (x, w) in rule.points.iter().zip(&rule.weights) {
        edge_basis.eval_into(x, &mut mu);
        cell_basis.grad_into(x, &mut g);
        for j in 0..nc {
            let flux = w * g[j].dot(&kn);
            for i in 0..ne {
                m[(i, j)] += mu[i] * flux;
            }
        }
    }
    Ok(m)
}
