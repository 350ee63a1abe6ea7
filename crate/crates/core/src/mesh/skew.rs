use nalgebra::SymmetricEigen;

use super::{Mesh, Polygon};
use crate::{HhoError, Result, Tensor};

/// Linear map sending a (possibly stretched) cell onto an isotropic image.
#[derive(Clone, Debug)]
pub struct SkewMap {
    pub cell: usize,
    pub matrix: Tensor,
    /// `|det matrix|`.
    pub jacobian: f64,
}

impl SkewMap {
    /// `J_{T|F} = |matrix * t|` for a unit tangent `t`.
    pub fn edge_jacobian(&self, tangent: &crate::Point) -> f64 {
        (self.matrix * tangent).norm()
    }
}

/// Mesh flatness `fl_h = max_T h_T / rho_T`, with the per-cell values.
#[derive(Clone, Debug)]
pub struct Flatness {
    pub fl_h: f64,
    pub per_cell: Vec<f64>,
}

pub fn flatness(mesh: &Mesh) -> Result<Flatness> {
    let per_cell = mesh
        .cells
        .iter()
        .enumerate()
        .map(|(c, cell)| {
            cell.geometry
                .flatness()
                .map_err(|e| HhoError::Degenerate(format!("cell {c}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let fl_h = per_cell.iter().copied().fold(0.0, f64::max);
    Ok(Flatness { fl_h, per_cell })
}

pub fn estimate_skew_map(mesh: &Mesh, cell: usize) -> Result<SkewMap> {
    let c = mesh
        .cells
        .get(cell)
        .ok_or_else(|| HhoError::InvalidInput(format!("no cell {cell}")))?;
    let matrix = inertial_map(&c.geometry)?;
    Ok(SkewMap {
        cell,
        jacobian: matrix.determinant().abs(),
        matrix,
    })
}

/// Area-preserving symmetric map `R diag(sqrt(l/l1), sqrt(l/l2)) R^t` with
/// `l = sqrt(l1 l2)`, built from the eigen-decomposition `R diag(l1, l2) R^t`
/// of the cell covariance; the image has equal principal second moments.
pub fn inertial_map(poly: &Polygon) -> Result<Tensor> {
    let cov = poly.covariance();
    if cov[(0, 1)] == 0.0 {
        // axis-aligned, keep the result exactly diagonal
        let (l1, l2) = (cov[(0, 0)], cov[(1, 1)]);
        check_moments(l1, l2)?;
        let g = (l1 * l2).sqrt();
        return Ok(Tensor::new((g / l1).sqrt(), 0.0, 0.0, (g / l2).sqrt()));
    }
    let eig = SymmetricEigen::new(cov);
    let (l1, l2) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    check_moments(l1, l2)?;
    let g = (l1 * l2).sqrt();
    let r = eig.eigenvectors;
    let d = Tensor::new((g / l1).sqrt(), 0.0, 0.0, (g / l2).sqrt());
    let m = r * d * r.transpose();
    Ok((m + m.transpose()) * 0.5)
}

fn check_moments(l1: f64, l2: f64) -> Result<()> {
    let (lo, hi) = (l1.min(l2), l1.max(l2));
    if !(lo > 1e-14 * hi) {
        return Err(HhoError::Degenerate(format!(
            "second moments {lo:e} / {hi:e}: needle-like cell"
        )));
    }
    Ok(())
}
