use nalgebra::{DMatrix, DVector};

use crate::field::ScalarField;
use crate::mesh::{Mesh, Polygon};
use crate::poly::{
    dim_cell, l2_project_with, polygon_quadrature, segment_quadrature, CellBasis, EdgeBasis,
    QuadRule, PROJECTION_EXTRA,
};
use crate::{HhoError, Point, Result, Tensor};

/// Hybrid unknowns of one cell: `v_T` in the first `dim P^k` cell basis
/// functions, then one `P^k(F)` vector per edge in the cell's edge order.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalDofVector {
    pub cell: DVector<f64>,
    pub edges: Vec<DVector<f64>>,
}

impl LocalDofVector {
    pub fn zeros(k: usize, num_edges: usize) -> Self {
        LocalDofVector {
            cell: DVector::zeros(dim_cell(k)),
            edges: vec![DVector::zeros(k + 1); num_edges],
        }
    }

    pub fn to_flat(&self) -> DVector<f64> {
        let n = self.cell.len() + self.edges.iter().map(|e| e.len()).sum::<usize>();
        let mut v = DVector::zeros(n);
        v.rows_mut(0, self.cell.len()).copy_from(&self.cell);
        let mut off = self.cell.len();
        for e in &self.edges {
            v.rows_mut(off, e.len()).copy_from(e);
            off += e.len();
        }
        v
    }

    pub fn from_flat(v: &DVector<f64>, k: usize, num_edges: usize) -> Result<Self> {
        let (nc, nf) = (dim_cell(k), k + 1);
        if v.len() != nc + num_edges * nf {
            return Err(HhoError::InvalidInput(format!(
                "local vector of length {}",
                v.len()
            )));
        }
        Ok(LocalDofVector {
            cell: v.rows(0, nc).into_owned(),
            edges: (0..num_edges)
                .map(|i| v.rows(nc + i * nf, nf).into_owned())
                .collect(),
        })
    }
}

/// Per-edge data of a [`LocalSpace`].
#[derive(Clone, Debug)]
pub struct LocalEdge {
    pub basis: EdgeBasis,
    pub normal: Point,
    pub tangent: Point,
    pub length: f64,
    pub d_tf: f64,
    /// `(mu_a, mu_b)_F`.
    pub mass: DMatrix<f64>,
    /// `(mu_a, phi_i)_F` against the degree `k+1` cell basis.
    pub trace: DMatrix<f64>,
    /// `(mu_a, d_x phi_i)_F` and `(mu_a, d_y phi_i)_F`.
    pub flux_x: DMatrix<f64>,
    pub flux_y: DMatrix<f64>,
    /// `mass^{-1} trace[:, :n_k]`: coefficients of the traces of the `P^k(T)`
    /// basis functions.
    pub restriction: DMatrix<f64>,
}

impl LocalEdge {
    /// `(mu_a, K grad phi_i . n_TF)_F`.
    pub fn normal_flux(&self, k: &Tensor) -> DMatrix<f64> {
        let kn = k * self.normal;
        &self.flux_x * kn.x + &self.flux_y * kn.y
    }

    pub fn k_nn(&self, k: &Tensor) -> f64 {
        self.normal.dot(&(k * self.normal))
    }
}

/// Tensor-independent integrals of one cell, from which every local operator
/// is assembled.
#[derive(Clone, Debug)]
pub struct LocalSpace {
    pub k: usize,
    pub area: f64,
    /// Degree `k+1` basis; its first `dim P^k` functions span `P^k(T)`.
    pub basis: CellBasis,
    pub quad: QuadRule,
    pub mass: DMatrix<f64>,
    /// `(phi_i, 1)_T`.
    pub means: DVector<f64>,
    /// `(d_a phi_i, d_b phi_j)_T` for `(a, b) = (x, x), (x, y), (y, y)`.
    pub stiff_xx: DMatrix<f64>,
    pub stiff_xy: DMatrix<f64>,
    pub stiff_yy: DMatrix<f64>,
    pub edges: Vec<LocalEdge>,
}

impl LocalSpace {
    pub fn new(mesh: &Mesh, cell: usize, k: usize) -> Result<Self> {
        let c = mesh
            .cells
            .get(cell)
            .ok_or_else(|| HhoError::InvalidInput(format!("no cell {cell}")))?;
        Self::from_polygon(&c.geometry, k)
    }

    pub fn with_exactness(
        poly: &Polygon,
        k: usize,
        cell_exactness: usize,
        edge_exactness: usize,
    ) -> Result<Self> {
        let quad = polygon_quadrature(poly, cell_exactness.max(2 * k + 2));
        let basis = CellBasis::with_rule(poly, k + 1, &quad)?;
        let n1 = basis.dim();
        let mut mass = DMatrix::zeros(n1, n1);
        let mut means = DVector::zeros(n1);
        let (mut sxx, mut sxy, mut syy) = (
            DMatrix::zeros(n1, n1),
            DMatrix::zeros(n1, n1),
            DMatrix::zeros(n1, n1),
        );
        let mut v = vec![0.0; n1];
        let mut g = vec![Point::zeros(); n1];
        for (x, &w) in quad.points.iter().zip(&quad.weights) {
            basis.eval_into(x, &mut v);
            basis.grad_into(x, &mut g);
            for i in 0..n1 {
                means[i] += w * v[i];
                for j in 0..n1 {
                    mass[(i, j)] += w * v[i] * v[j];
                    sxx[(i, j)] += w * g[i].x * g[j].x;
                    sxy[(i, j)] += w * g[i].x * g[j].y;
                    syy[(i, j)] += w * g[i].y * g[j].y;
                }
            }
        }
        let nk = dim_cell(k);
        let mut edges = Vec::with_capacity(poly.num_edges());
        for (i, pe) in poly.edges.iter().enumerate() {
            let (a, b) = (pe.start, pe.end);
            let eb = EdgeBasis::new(&a, &b, &pe.tangent, k)?;
            let rule = segment_quadrature(&a, &b, edge_exactness.max(2 * k + 1));
            let nf = k + 1;
            let mut m = DMatrix::zeros(nf, nf);
            let mut tr = DMatrix::zeros(nf, n1);
            let (mut fx, mut fy) = (DMatrix::zeros(nf, n1), DMatrix::zeros(nf, n1));
            let mut mu = vec![0.0; nf];
            for (x, &w) in rule.points.iter().zip(&rule.weights) {
                eb.eval_into(x, &mut mu);
                basis.eval_into(x, &mut v);
                basis.grad_into(x, &mut g);
                for a in 0..nf {
                    let wm = w * mu[a];
                    for b in 0..nf {
                        m[(a, b)] += wm * mu[b];
                    }
                    for j in 0..n1 {
                        tr[(a, j)] += wm * v[j];
                        fx[(a, j)] += wm * g[j].x;
                        fy[(a, j)] += wm * g[j].y;
                    }
                }
            }
            let chol = m
                .clone()
                .cholesky()
                .ok_or_else(|| HhoError::SingularLocal("edge mass matrix".into()))?;
            let restriction = chol.solve(&tr.columns(0, nk).into_owned());
            edges.push(LocalEdge {
                basis: eb,
                normal: pe.normal,
                tangent: pe.tangent,
                length: pe.length,
                d_tf: poly.d_tf(i),
                mass: m,
                trace: tr,
                flux_x: fx,
                flux_y: fy,
                restriction,
            });
        }
        Ok(LocalSpace {
            k,
            area: poly.area,
            basis,
            quad,
            mass,
            means,
            stiff_xx: sxx,
            stiff_xy: sxy,
            stiff_yy: syy,
            edges,
        })
    }

    /// Default quadrature: exactness `2k+3` on cells, `2k+2` on edges.
    pub fn from_polygon(poly: &Polygon, k: usize) -> Result<Self> {
        Self::with_exactness(poly, k, 2 * k + 3, 2 * k + 2)
    }

    pub fn n_cell(&self) -> usize {
        dim_cell(self.k)
    }

    pub fn n_edge(&self) -> usize {
        self.k + 1
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn ndof(&self) -> usize {
        self.n_cell() + self.edges.len() * self.n_edge()
    }

    pub fn edge_offset(&self, i: usize) -> usize {
        self.n_cell() + i * self.n_edge()
    }

    /// `(K grad phi_i, grad phi_j)_T` on the degree `k+1` basis.
    pub fn stiffness(&self, k: &Tensor) -> DMatrix<f64> {
        let s = &self.stiff_xx * k[(0, 0)]
            + &self.stiff_xy * k[(1, 0)]
            + self.stiff_xy.transpose() * k[(0, 1)]
            + &self.stiff_yy * k[(1, 1)];
        (&s + s.transpose()) * 0.5
    }

    /// `(f, phi_i)_T` for the `P^k(T)` basis functions.
    pub fn load(&self, f: impl Fn(&Point) -> f64) -> DVector<f64> {
        let nk = self.n_cell();
        let mut b = DVector::zeros(nk);
        let mut v = vec![0.0; self.basis.dim()];
        for (x, &w) in self.quad.points.iter().zip(&self.quad.weights) {
            self.basis.eval_into(x, &mut v);
            let fx = w * f(x);
            for i in 0..nk {
                b[i] += fx * v[i];
            }
        }
        b
    }

    /// Local interpolate `(pi_T^k v, (pi_F^k v)_F)`, with quadrature of
    /// exactness `2k + PROJECTION_EXTRA` on the cell and on every edge.
    pub fn interpolate(&self, poly: &Polygon, v: impl Fn(&Point) -> f64) -> Result<LocalDofVector> {
        let q = 2 * self.k + PROJECTION_EXTRA;
        let nk = self.n_cell();
        let rule = polygon_quadrature(poly, q);
        let basis = &self.basis;
        let cell = l2_project_with(
            |x, out| {
                let mut all = [0.0; 64];
                basis.eval_into(x, &mut all[..basis.dim()]);
                out.copy_from_slice(&all[..nk]);
            },
            nk,
            &rule,
            &v,
        )?;
        let edges = poly
            .edges
            .iter()
            .zip(&self.edges)
            .map(|(pe, le)| {
                let rule = segment_quadrature(&pe.start, &pe.end, q);
                l2_project_with(
                    |x, out| le.basis.eval_into(x, out),
                    self.n_edge(),
                    &rule,
                    &v,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalDofVector { cell, edges })
    }

    /// Evaluates the cell polynomial with coefficients `c` (any prefix length).
    pub fn eval_cell(&self, c: &[f64], x: &Point) -> f64 {
        self.basis.eval_poly(c, x)
    }
}

pub fn interpolate_local(
    v: impl Fn(&Point) -> f64,
    mesh: &Mesh,
    cell: usize,
    k: usize,
) -> Result<LocalDofVector> {
    let space = LocalSpace::new(mesh, cell, k)?;
    space.interpolate(&mesh.cells[cell].geometry, v)
}

/// Interpolate of a smooth field (value only is used).
pub fn interpolate_field(
    space: &LocalSpace,
    poly: &Polygon,
    v: &dyn ScalarField,
) -> Result<LocalDofVector> {
    space.interpolate(poly, |x| v.value(x))
}
