use nalgebra::DVector;
use rayon::prelude::*;

use crate::field::DiffusionField;
use crate::local::{build_local_operators, local_energy, seminorm_squared, LocalSpace};
use crate::mesh::Mesh;
use crate::poly::{polygon_quadrature, PROJECTION_EXTRA};
use crate::system::{project_on_edge, HybridVector};
use crate::{HhoError, Point, Result, Tensor};

/// Denominators below this switch the report to absolute errors.
pub const ZERO_NORM: f64 = 1e-14;

/// A relative error, or an absolute one when the reference norm vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorValue {
    pub value: f64,
    pub absolute: bool,
}

impl ErrorValue {
    fn from_squares(num: f64, den: f64) -> Self {
        let (num, den) = (num.max(0.0).sqrt(), den.max(0.0).sqrt());
        if den < ZERO_NORM {
            ErrorValue {
                value: num,
                absolute: true,
            }
        } else {
            ErrorValue {
                value: num / den,
                absolute: false,
            }
        }
    }
}

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub h: f64,
    pub nb_edge_dofs: usize,
    pub energy_error: f64,
    pub h1_error: f64,
    pub l2_error: f64,
    pub condition_number: Option<f64>,
    pub flatness: f64,
    pub k: usize,
    /// Set when some error had a vanishing reference norm.
    pub absolute: bool,
}

/// `I_h u`: L² projections on every cell and every edge.
pub fn global_interpolate(
    u: &(dyn Fn(&Point) -> f64 + Sync),
    mesh: &Mesh,
    k: usize,
) -> Result<HybridVector> {
    let mut v = HybridVector::zeros(mesh, k);
    let cells = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let space = LocalSpace::new(mesh, c, k)?;
            Ok(space.interpolate(&mesh.cells[c].geometry, u)?.cell)
        })
        .collect::<Result<Vec<DVector<f64>>>>()?;
    for (c, vc) in cells.iter().enumerate() {
        v.cell_mut(c).copy_from_slice(vc.as_slice());
    }
    let edges = (0..mesh.num_edges())
        .into_par_iter()
        .map(|e| project_on_edge(mesh, e, k, u))
        .collect::<Result<Vec<_>>>()?;
    for (e, ve) in edges.iter().enumerate() {
        v.edge_mut(e).copy_from_slice(ve.as_slice());
    }
    Ok(v)
}

fn check_layout(mesh: &Mesh, a: &HybridVector, b: &HybridVector) -> Result<()> {
    a.check_compatible(b)?;
    if a.cell_values.len() != mesh.num_cells() * a.n_cell()
        || a.edge_values.len() != mesh.num_edges() * a.n_edge()
    {
        return Err(HhoError::InvalidInput(
            "hybrid vector does not match the mesh".into(),
        ));
    }
    Ok(())
}

/// Per-cell `(|d|^2, |ref|^2)` summed in cell order.
fn relative_sum(
    mesh: &Mesh,
    per_cell: impl Fn(usize) -> Result<(f64, f64)> + Sync + Send,
) -> Result<(f64, f64)> {
    let parts = (0..mesh.num_cells())
        .into_par_iter()
        .map(per_cell)
        .collect::<Result<Vec<_>>>()?;
    Ok(parts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y)))
}

/// `|I_h u - u_h|_{a,K,h} / |I_h u|_{a,K,h}`.
pub fn energy_error(
    uh: &HybridVector,
    ihu: &HybridVector,
    mesh: &Mesh,
    diffusion: &DiffusionField,
    k: usize,
) -> Result<ErrorValue> {
    check_layout(mesh, uh, ihu)?;
    let (num, den) = relative_sum(mesh, |c| {
        let space = LocalSpace::new(mesh, c, k)?;
        let k_t = diffusion.at(mesh, c);
        let ops = build_local_operators(&space, &k_t)?;
        let r = ihu.local(mesh, c);
        let d = &r - uh.local(mesh, c);
        Ok((
            local_energy(&space, &k_t, &ops, &d),
            local_energy(&space, &k_t, &ops, &r),
        ))
    })?;
    Ok(ErrorValue::from_squares(num, den))
}

/// Same as [`energy_error`] in the diffusion-independent discrete H¹ norm.
pub fn h1_error(
    uh: &HybridVector,
    ihu: &HybridVector,
    mesh: &Mesh,
    k: usize,
) -> Result<ErrorValue> {
    check_layout(mesh, uh, ihu)?;
    let (num, den) = relative_sum(mesh, |c| {
        let space = LocalSpace::new(mesh, c, k)?;
        let id = Tensor::identity();
        let r = ihu.local(mesh, c);
        let d = &r - uh.local(mesh, c);
        Ok((
            seminorm_squared(&space, &id, &d),
            seminorm_squared(&space, &id, &r),
        ))
    })?;
    Ok(ErrorValue::from_squares(num, den))
}

/// `(sum_T |u_T - u|_T^2)^{1/2} / |u|_{L^2}`.
pub fn l2_error(
    uh: &HybridVector,
    u: &(dyn Fn(&Point) -> f64 + Sync),
    mesh: &Mesh,
    k: usize,
) -> Result<ErrorValue> {
    if uh.cell_values.len() != mesh.num_cells() * uh.n_cell() || uh.k != k {
        return Err(HhoError::InvalidInput(
            "hybrid vector does not match the mesh".into(),
        ));
    }
    let (num, den) = relative_sum(mesh, |c| {
        let space = LocalSpace::new(mesh, c, k)?;
        let rule = polygon_quadrature(&mesh.cells[c].geometry, 2 * k + PROJECTION_EXTRA);
        let ut = uh.cell(c);
        let mut e = 0.0;
        let mut n = 0.0;
        for (x, &w) in rule.points.iter().zip(&rule.weights) {
            let ux = u(x);
            e += w * (space.eval_cell(ut, x) - ux).powi(2);
            n += w * ux * ux;
        }
        Ok((e, n))
    })?;
    Ok(ErrorValue::from_squares(num, den))
}

/// Energy, H¹ and L² errors in a single sweep over the cells.
pub fn all_errors(
    uh: &HybridVector,
    ihu: &HybridVector,
    u: &(dyn Fn(&Point) -> f64 + Sync),
    mesh: &Mesh,
    diffusion: &DiffusionField,
    k: usize,
) -> Result<[ErrorValue; 3]> {
    check_layout(mesh, uh, ihu)?;
    let parts = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let space = LocalSpace::new(mesh, c, k)?;
            let k_t = diffusion.at(mesh, c);
            let ops = build_local_operators(&space, &k_t)?;
            let id = Tensor::identity();
            let r = ihu.local(mesh, c);
            let d = &r - uh.local(mesh, c);
            let rule = polygon_quadrature(&mesh.cells[c].geometry, 2 * k + PROJECTION_EXTRA);
            let ut = uh.cell(c);
            let (mut e2, mut n2) = (0.0, 0.0);
            for (x, &w) in rule.points.iter().zip(&rule.weights) {
                let ux = u(x);
                e2 += w * (space.eval_cell(ut, x) - ux).powi(2);
                n2 += w * ux * ux;
            }
            Ok([
                local_energy(&space, &k_t, &ops, &d),
                local_energy(&space, &k_t, &ops, &r),
                seminorm_squared(&space, &id, &d),
                seminorm_squared(&space, &id, &r),
                e2,
                n2,
            ])
        })
        .collect::<Result<Vec<[f64; 6]>>>()?;
    let mut s = [0.0; 6];
    for p in &parts {
        for i in 0..6 {
            s[i] += p[i];
        }
    }
    Ok([
        ErrorValue::from_squares(s[0], s[1]),
        ErrorValue::from_squares(s[2], s[3]),
        ErrorValue::from_squares(s[4], s[5]),
    ])
}
