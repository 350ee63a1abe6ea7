use faer::sparse::{SparseColMat, SymbolicSparseColMat};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rayon::prelude::*;

use super::dofs::DofMap;
use crate::field::DiffusionField;
use crate::local::{build_local_operators, LocalSpace};
use crate::mesh::Mesh;
use crate::poly::{l2_project_edge, EdgeBasis};
use crate::{HhoError, Point, Result};

/// Source term evaluated on a cell (the cell index lets piecewise data use
/// the local tensor).
pub type SourceFn<'a> = &'a (dyn Fn(usize, &Point) -> f64 + Sync);
pub type BoundaryFn<'a> = &'a (dyn Fn(&Point) -> f64 + Sync);

/// `-div(K grad u) = f` in the domain, `u = g` on the boundary.
#[derive(Clone, Copy)]
pub struct Problem<'a> {
    pub mesh: &'a Mesh,
    pub diffusion: &'a DiffusionField,
    pub source: SourceFn<'a>,
    pub boundary: BoundaryFn<'a>,
    pub k: usize,
}

/// Stored cell data for back-substitution `u_T = A_TT^{-1} (b_T - A_TF u_F)`.
#[derive(Clone, Debug)]
pub struct CellRecovery {
    pub cell_block: Cholesky<f64, Dyn>,
    pub coupling: DMatrix<f64>,
    pub load: DVector<f64>,
}

/// Statically condensed system on the interior edge unknowns.
#[derive(Debug)]
pub struct CondensedSystem {
    pub k: usize,
    pub dofs: DofMap,
    /// Both triangles are stored.
    pub matrix: SparseColMat<usize, f64>,
    pub rhs: Vec<f64>,
    /// `pi_F^k g` on boundary edges, zero elsewhere; laid out per edge.
    pub boundary_values: Vec<f64>,
    pub recovery: Vec<CellRecovery>,
}

impl CondensedSystem {
    pub fn dim(&self) -> usize {
        self.dofs.total
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let (sym, val) = self.matrix.parts();
        let (cp, ri) = (sym.col_ptr(), sym.row_idx());
        y.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..self.dim() {
            let xj = x[j];
            for p in cp[j]..cp[j + 1] {
                y[ri[p]] += val[p] * xj;
            }
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let (sym, val) = self.matrix.parts();
        let (cp, ri) = (sym.col_ptr(), sym.row_idx());
        (0..self.dim())
            .map(|j| {
                (cp[j]..cp[j + 1])
                    .find(|&p| ri[p] == j)
                    .map_or(0.0, |p| val[p])
            })
            .collect()
    }

    /// `max_j sum_i |a_ij|`.
    pub fn norm_1(&self) -> f64 {
        let (sym, val) = self.matrix.parts();
        let cp = sym.col_ptr();
        (0..self.dim())
            .map(|j| val[cp[j]..cp[j + 1]].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `max |A - A^t| / max |A|`.
    pub fn asymmetry(&self) -> f64 {
        let (sym, val) = self.matrix.parts();
        let (cp, ri) = (sym.col_ptr(), sym.row_idx());
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for j in 0..self.dim() {
            for p in cp[j]..cp[j + 1] {
                let i = ri[p];
                scale = scale.max(val[p].abs());
                let q = (cp[i]..cp[i + 1])
                    .find(|&q| ri[q] == j)
                    .map_or(0.0, |q| val[q]);
                worst = worst.max((val[p] - q).abs());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Coordinate text dump, one `row col value` line per stored entry.
    pub fn write_coordinates(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        let (sym, val) = self.matrix.parts();
        let (cp, ri) = (sym.col_ptr(), sym.row_idx());
        writeln!(out, "{} {} {}", self.dim(), self.dim(), val.len())?;
        for j in 0..self.dim() {
            for p in cp[j]..cp[j + 1] {
                writeln!(out, "{} {} {:e}", ri[p], j, val[p])?;
            }
        }
        Ok(())
    }
}

/// `pi_F^k g` in the basis shared by both sides of the edge.
pub fn project_on_edge(
    mesh: &Mesh,
    edge: usize,
    k: usize,
    g: impl Fn(&Point) -> f64,
) -> Result<DVector<f64>> {
    let e = &mesh.edges[edge];
    let (a, b) = (mesh.vertices[e.vertices[0]], mesh.vertices[e.vertices[1]]);
    let basis = EdgeBasis::new(&a, &b, &e.tangent, k)?;
    l2_project_edge(g, mesh, edge, &basis)
}

/// Block sparsity of the condensed matrix: interior edge `I` couples with `J`
/// when both belong to a common cell.
struct Pattern {
    neighbours: Vec<Vec<usize>>,
    col_ptr: Vec<usize>,
}

impl Pattern {
    fn new(mesh: &Mesh, dofs: &DofMap) -> Self {
        let ni = dofs.interior_edges.len();
        let nf = dofs.per_edge;
        let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); ni];
        for (s, &e) in dofs.interior_edges.iter().enumerate() {
            let list = &mut neighbours[s];
            for &c in &mesh.edges[e].cells {
                list.extend(mesh.cells[c].edges.iter().filter_map(|&f| dofs.slot(f)));
            }
            list.sort_unstable();
            list.dedup();
        }
        let mut col_ptr = Vec::with_capacity(ni * nf + 1);
        col_ptr.push(0);
        for list in &neighbours {
            for _ in 0..nf {
                let last = *col_ptr.last().unwrap_or(&0);
                col_ptr.push(last + list.len() * nf);
            }
        }
        Pattern {
            neighbours,
            col_ptr,
        }
    }

    fn row_idx(&self, nf: usize) -> Vec<usize> {
        let mut r = Vec::with_capacity(*self.col_ptr.last().unwrap_or(&0));
        for list in &self.neighbours {
            for _ in 0..nf {
                for &s in list {
                    r.extend((0..nf).map(|a| s * nf + a));
                }
            }
        }
        r
    }

    /// Storage position of entry `(slot_i, a) x (slot_j, b)`.
    fn position(&self, nf: usize, si: usize, a: usize, sj: usize, b: usize) -> usize {
        let p = self.neighbours[sj]
            .binary_search(&si)
            .expect("entry inside the block pattern");
        self.col_ptr[sj * nf + b] + p * nf + a
    }
}

struct CellContribution {
    recovery: CellRecovery,
    schur: DMatrix<f64>,
    rhs: DVector<f64>,
}

fn condense_cell(problem: &Problem, cell: usize) -> Result<CellContribution> {
    let mesh = problem.mesh;
    let k_t = problem.diffusion.at(mesh, cell);
    let space = LocalSpace::new(mesh, cell, problem.k)?;
    let ops = build_local_operators(&space, &k_t)?;
    let source = problem.source;
    let load = space.load(|x| source(cell, x));
    let nk = space.n_cell();
    let nfl = space.ndof() - nk;
    let a = &ops.bilinear;
    let a_tt = a.view((0, 0), (nk, nk)).into_owned();
    let a_tf = a.view((0, nk), (nk, nfl)).into_owned();
    let a_ff = a.view((nk, nk), (nfl, nfl)).into_owned();
    let chol = Cholesky::new(a_tt).ok_or_else(|| {
        HhoError::SingularLocal(format!("cell {cell}: cell block is not positive definite"))
    })?;
    let x = chol.solve(&a_tf);
    let y = chol.solve(&load);
    let schur = &a_ff - a_tf.transpose() * &x;
    let schur = (&schur + schur.transpose()) * 0.5;
    let rhs = -(a_tf.transpose() * &y);
    Ok(CellContribution {
        recovery: CellRecovery {
            cell_block: chol,
            coupling: a_tf,
            load,
        },
        schur,
        rhs,
    })
}

const CHUNK: usize = 4096;

/// Assembles the condensed system with strongly imposed Dirichlet data.
pub fn assemble(problem: &Problem) -> Result<CondensedSystem> {
    let mesh = problem.mesh;
    let k = problem.k;
    problem.diffusion.validate(mesh)?;
    let dofs = DofMap::new(mesh, k);
    let nf = dofs.per_edge;

    let mut boundary_values = vec![0.0; mesh.num_edges() * nf];
    for e in 0..mesh.num_edges() {
        if dofs.is_boundary(e) {
            let g = project_on_edge(mesh, e, k, problem.boundary)?;
            boundary_values[e * nf..(e + 1) * nf].copy_from_slice(g.as_slice());
        }
    }

    let pattern = Pattern::new(mesh, &dofs);
    let nnz = *pattern.col_ptr.last().unwrap_or(&0);
    let mut values = vec![0.0; nnz];
    let mut rhs = vec![0.0; dofs.total];
    let mut recovery = Vec::with_capacity(mesh.num_cells());

    let cells: Vec<usize> = (0..mesh.num_cells()).collect();
    for chunk in cells.chunks(CHUNK) {
        let contributions = chunk
            .par_iter()
            .map(|&c| condense_cell(problem, c))
            .collect::<Result<Vec<_>>>()?;
        for (&c, contrib) in chunk.iter().zip(contributions) {
            let edges = &mesh.cells[c].edges;
            for (j, &ej) in edges.iter().enumerate() {
                match dofs.slot(ej) {
                    Some(sj) => {
                        for b in 0..nf {
                            let col = j * nf + b;
                            rhs[sj * nf + b] += contrib.rhs[col];
                            for (i, &ei) in edges.iter().enumerate() {
                                if let Some(si) = dofs.slot(ei) {
                                    for a in 0..nf {
                                        values[pattern.position(nf, si, a, sj, b)] +=
                                            contrib.schur[(i * nf + a, col)];
                                    }
                                }
                            }
                        }
                    }
                    None => {
                        let g = &boundary_values[ej * nf..(ej + 1) * nf];
                        for (i, &ei) in edges.iter().enumerate() {
                            if let Some(si) = dofs.slot(ei) {
                                for a in 0..nf {
                                    let s: f64 = (0..nf)
                                        .map(|b| contrib.schur[(i * nf + a, j * nf + b)] * g[b])
                                        .sum();
                                    rhs[si * nf + a] -= s;
                                }
                            }
                        }
                    }
                }
            }
            recovery.push(contrib.recovery);
        }
    }

    let row_idx = pattern.row_idx(nf);
    let symbolic =
        SymbolicSparseColMat::new_checked(dofs.total, dofs.total, pattern.col_ptr, None, row_idx);
    let matrix = SparseColMat::new(symbolic, values);
    Ok(CondensedSystem {
        k,
        dofs,
        matrix,
        rhs,
        boundary_values,
        recovery,
    })
}
