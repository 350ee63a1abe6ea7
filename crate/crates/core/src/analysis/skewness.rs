use nalgebra::SymmetricEigen;

use crate::field::DiffusionField;
use crate::mesh::{estimate_skew_map, Mesh, SkewMap};
use crate::poly::check_spd;
use crate::{HhoError, Result, Tensor};

/// `K^ = phi K phi^t` with its extreme eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransportedTensor {
    pub tensor: Tensor,
    pub max: f64,
    pub min: f64,
    /// `max / min`.
    pub ratio: f64,
}

pub fn transported_tensor(k: &Tensor, phi: &Tensor) -> Result<TransportedTensor> {
    check_spd(k)?;
    let det = phi.determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(HhoError::InvalidInput("skew map is not invertible".into()));
    }
    let t = phi * k * phi.transpose();
    let t = (t + t.transpose()) * 0.5;
    let eig = SymmetricEigen::new(t).eigenvalues;
    let (min, max) = (eig[0].min(eig[1]), eig[0].max(eig[1]));
    if !(min > 0.0) {
        return Err(HhoError::NotSpd(format!(
            "transported tensor has eigenvalue {min:e}"
        )));
    }
    Ok(TransportedTensor {
        tensor: t,
        max,
        min,
        ratio: max / min,
    })
}

/// `max(a sqrt(l), b) * max(a sqrt(l) / b, b / (a sqrt(l)))`, the factor for
/// `K = diag(l, 1)` and `phi = diag(a, b)`.
pub fn interplay_factor(a: f64, b: f64, lambda: f64) -> f64 {
    let s = a * lambda.sqrt();
    s.max(b) * (s / b).max(b / s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellDiagnostics {
    pub cell: usize,
    pub flatness: f64,
    pub khat_max: f64,
    pub khat_min: f64,
    pub ratio: f64,
    /// `(khat_max * ratio)^{1/2}` for the given (unit-determinant) map.
    pub factor: f64,
    /// The factor once the map is rescaled so its smallest singular value is 1.
    pub scaled_factor: f64,
    /// Closed-form interplay factor, when both `K_T` and the map are diagonal.
    pub interplay: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkewnessDiagnostics {
    pub cells: Vec<CellDiagnostics>,
    pub fl_h: f64,
    pub max_factor: f64,
    pub max_scaled_factor: f64,
    /// Max of the closed-form factor over the cells that have one.
    pub max_interplay: Option<f64>,
}

fn is_diagonal(t: &Tensor) -> bool {
    let off = t[(0, 1)].abs().max(t[(1, 0)].abs());
    off <= 1e-12 * t[(0, 0)].abs().max(t[(1, 1)].abs())
}

fn smallest_singular_value(phi: &Tensor) -> f64 {
    let s = phi.singular_values();
    s[0].min(s[1])
}

fn cell_diagnostics(mesh: &Mesh, k_t: &Tensor, map: &SkewMap) -> Result<CellDiagnostics> {
    let c = map.cell;
    let cell = mesh
        .cells
        .get(c)
        .ok_or_else(|| HhoError::InvalidInput(format!("no cell {c}")))?;
    let t = transported_tensor(k_t, &map.matrix)?;
    let factor = (t.max * t.ratio).sqrt();
    let scale = 1.0 / smallest_singular_value(&map.matrix);
    let interplay = (is_diagonal(k_t) && is_diagonal(&map.matrix)).then(|| {
        let (a, b) = (
            scale * map.matrix[(0, 0)].abs(),
            scale * map.matrix[(1, 1)].abs(),
        );
        k_t[(1, 1)].sqrt() * interplay_factor(a, b, k_t[(0, 0)] / k_t[(1, 1)])
    });
    Ok(CellDiagnostics {
        cell: c,
        flatness: cell.geometry.flatness()?,
        khat_max: t.max,
        khat_min: t.min,
        ratio: t.ratio,
        factor,
        scaled_factor: scale * factor,
        interplay,
    })
}

/// Per-cell predicted constants `(khat_max rho)^{1/2}` for the given maps.
pub fn predicted_bound_factor(
    mesh: &Mesh,
    diffusion: &DiffusionField,
    maps: &[SkewMap],
) -> Result<SkewnessDiagnostics> {
    diffusion.validate(mesh)?;
    let cells = maps
        .iter()
        .map(|m| cell_diagnostics(mesh, &diffusion.at(mesh, m.cell), m))
        .collect::<Result<Vec<_>>>()?;
    let max = |f: fn(&CellDiagnostics) -> f64| cells.iter().map(f).fold(0.0, f64::max);
    let max_interplay = cells.iter().filter_map(|c| c.interplay).reduce(f64::max);
    Ok(SkewnessDiagnostics {
        fl_h: max(|c| c.flatness),
        max_factor: max(|c| c.factor),
        max_scaled_factor: max(|c| c.scaled_factor),
        max_interplay,
        cells,
    })
}

/// [`predicted_bound_factor`] with the inertial skew map of every cell.
pub fn skewness_diagnostics(
    mesh: &Mesh,
    diffusion: &DiffusionField,
) -> Result<SkewnessDiagnostics> {
    let maps = (0..mesh.num_cells())
        .map(|c| estimate_skew_map(mesh, c))
        .collect::<Result<Vec<_>>>()?;
    predicted_bound_factor(mesh, diffusion, &maps)
}
