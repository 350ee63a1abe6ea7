use nalgebra::DVector;

use crate::mesh::Mesh;
use crate::poly::dim_cell;
use crate::{HhoError, Result};

/// Global hybrid vector: `P^k(T)` coefficients on every cell and `P^k(F)`
/// coefficients on every edge (boundary edges included).
#[derive(Clone, Debug, PartialEq)]
pub struct HybridVector {
    pub k: usize,
    pub cell_values: Vec<f64>,
    pub edge_values: Vec<f64>,
}

impl HybridVector {
    pub fn zeros(mesh: &Mesh, k: usize) -> Self {
        HybridVector {
            k,
            cell_values: vec![0.0; mesh.num_cells() * dim_cell(k)],
            edge_values: vec![0.0; mesh.num_edges() * (k + 1)],
        }
    }

    pub fn n_cell(&self) -> usize {
        dim_cell(self.k)
    }

    pub fn n_edge(&self) -> usize {
        self.k + 1
    }

    pub fn cell(&self, c: usize) -> &[f64] {
        let n = self.n_cell();
        &self.cell_values[c * n..(c + 1) * n]
    }

    pub fn cell_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.n_cell();
        &mut self.cell_values[c * n..(c + 1) * n]
    }

    pub fn edge(&self, e: usize) -> &[f64] {
        let n = self.n_edge();
        &self.edge_values[e * n..(e + 1) * n]
    }

    pub fn edge_mut(&mut self, e: usize) -> &mut [f64] {
        let n = self.n_edge();
        &mut self.edge_values[e * n..(e + 1) * n]
    }

    /// Flattened local vector of `cell` (cell block then its edges in order).
    pub fn local(&self, mesh: &Mesh, cell: usize) -> DVector<f64> {
        let edges = &mesh.cells[cell].edges;
        let mut v = Vec::with_capacity(self.n_cell() + edges.len() * self.n_edge());
        v.extend_from_slice(self.cell(cell));
        for &e in edges {
            v.extend_from_slice(self.edge(e));
        }
        DVector::from_vec(v)
    }

    pub fn check_compatible(&self, other: &HybridVector) -> Result<()> {
        if self.k != other.k
            || self.cell_values.len() != other.cell_values.len()
            || self.edge_values.len() != other.edge_values.len()
        {
            return Err(HhoError::InvalidInput(
                "hybrid vectors of different layouts".into(),
            ));
        }
        Ok(())
    }

    pub fn sub(&self, other: &HybridVector) -> Result<HybridVector> {
        self.check_compatible(other)?;
        Ok(HybridVector {
            k: self.k,
            cell_values: self
                .cell_values
                .iter()
                .zip(&other.cell_values)
                .map(|(a, b)| a - b)
                .collect(),
            edge_values: self
                .edge_values
                .iter()
                .zip(&other.edge_values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scaled(&self, s: f64) -> HybridVector {
        HybridVector {
            k: self.k,
            cell_values: self.cell_values.iter().map(|a| a * s).collect(),
            edge_values: self.edge_values.iter().map(|a| a * s).collect(),
        }
    }
}
