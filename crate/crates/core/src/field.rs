//! Scalar fields and diffusion coefficients.

use crate::mesh::Mesh;
use crate::poly::check_spd;
use crate::{Point, Result, Tensor};

/// A scalar field with its gradient.
pub trait ScalarField: Sync {
    fn value(&self, x: &Point) -> f64;
    fn grad(&self, x: &Point) -> Point;
}

/// Field given by a pair of closures.
pub struct FnField<F, G> {
    pub value: F,
    pub grad: G,
}

impl<F, G> ScalarField for FnField<F, G>
where
    F: Fn(&Point) -> f64 + Sync,
    G: Fn(&Point) -> Point + Sync,
{
    fn value(&self, x: &Point) -> f64 {
        (self.value)(x)
    }

    fn grad(&self, x: &Point) -> Point {
        (self.grad)(x)
    }
}

pub fn fn_field<F, G>(value: F, grad: G) -> FnField<F, G>
where
    F: Fn(&Point) -> f64 + Sync,
    G: Fn(&Point) -> Point + Sync,
{
    FnField { value, grad }
}

/// Piecewise-constant diffusion coefficient, one SPD tensor per cell.
#[derive(Clone, Debug)]
pub enum DiffusionField {
    Constant(Tensor),
    /// `diag(lambda, 1)` below `y = 1/2`, identity above (cells are assigned by
    /// their centroid).
    Layered {
        lambda: f64,
    },
    PerCell(Vec<Tensor>),
}

impl DiffusionField {
    pub fn identity() -> Self {
        DiffusionField::Constant(Tensor::identity())
    }

    pub fn diagonal(lambda: f64) -> Self {
        DiffusionField::Constant(Tensor::new(lambda, 0.0, 0.0, 1.0))
    }

    pub fn at(&self, mesh: &Mesh, cell: usize) -> Tensor {
        match self {
            DiffusionField::Constant(k) => *k,
            DiffusionField::Layered { lambda } => {
                layered_tensor(*lambda, &mesh.cells[cell].centroid())
            }
            DiffusionField::PerCell(v) => v[cell],
        }
    }

    pub fn validate(&self, mesh: &Mesh) -> Result<()> {
        match self {
            DiffusionField::PerCell(v) if v.len() != mesh.num_cells() => {
                Err(crate::HhoError::InvalidInput(format!(
                    "{} tensors for {} cells",
                    v.len(),
                    mesh.num_cells()
                )))
            }
            _ => (0..mesh.num_cells()).try_for_each(|c| check_spd(&self.at(mesh, c))),
        }
    }
}

pub fn layered_tensor(lambda: f64, x: &Point) -> Tensor {
    if x.y < 0.5 {
        Tensor::new(lambda, 0.0, 0.0, 1.0)
    } else {
        Tensor::identity()
    }
}
