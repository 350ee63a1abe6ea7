use nalgebra::{DMatrix, DVector};

use super::space::{LocalDofVector, LocalSpace};
use crate::field::ScalarField;
use crate::mesh::{Mesh, Polygon};
use crate::poly::{check_spd, polygon_quadrature, CellBasis};
use crate::{HhoError, Result, Tensor};

/// Local HHO matrices of one cell, acting on flattened [`LocalDofVector`]s.
#[derive(Clone, Debug)]
pub struct LocalOperatorSet {
    pub k: usize,
    /// `p_T`: local unknowns to `P^{k+1}(T)` coefficients.
    pub reconstruction: DMatrix<f64>,
    /// `(K grad p_T ., grad p_T .)_T`.
    pub consistency: DMatrix<f64>,
    /// `delta_T`, in `P^k(T)` coefficients.
    pub delta_cell: DMatrix<f64>,
    /// `delta_TF` per edge, in `P^k(F)` coefficients.
    pub delta_edges: Vec<DMatrix<f64>>,
    pub stabilization: DMatrix<f64>,
    /// `consistency + stabilization`.
    pub bilinear: DMatrix<f64>,
}

impl LocalOperatorSet {
    pub fn ndof(&self) -> usize {
        self.bilinear.nrows()
    }
}

/// Selection matrices `E_T` (cell block) and `E_F` (edge block `i`).
fn cell_selector(space: &LocalSpace) -> DMatrix<f64> {
    let mut e = DMatrix::zeros(space.n_cell(), space.ndof());
    for i in 0..space.n_cell() {
        e[(i, i)] = 1.0;
    }
    e
}

fn edge_selector(space: &LocalSpace, i: usize) -> DMatrix<f64> {
    let nf = space.n_edge();
    let off = space.edge_offset(i);
    let mut e = DMatrix::zeros(nf, space.ndof());
    for a in 0..nf {
        e[(a, off + a)] = 1.0;
    }
    e
}

/// Solves `(S + alpha m m^t) X = R + alpha m c^t`, i.e. `S X = R` with the
/// mean of `X` fixed to `c`, for a stiffness `S` whose kernel is the constants.
fn solve_with_mean(
    s: &DMatrix<f64>,
    m: &DVector<f64>,
    rhs: &DMatrix<f64>,
    c: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    let alpha = s.trace().max(f64::MIN_POSITIVE) / m.norm_squared();
    let lhs = s + m * m.transpose() * alpha;
    let r = rhs + m * c.transpose() * alpha;
    let chol = lhs.cholesky().ok_or_else(|| {
        HhoError::SingularLocal("reconstruction system is not positive definite".into())
    })?;
    Ok(chol.solve(&r))
}

/// Oblique elliptic projector `pi^l_{K,T} v`, returned with the degree `l`
/// basis it is expressed in.
pub fn elliptic_projector(
    v: &dyn ScalarField,
    degree: usize,
    k: &Tensor,
    poly: &Polygon,
) -> Result<(CellBasis, DVector<f64>)> {
    check_spd(k)?;
    let rule = polygon_quadrature(poly, 2 * degree + 8);
    let basis = CellBasis::with_rule(poly, degree, &rule)?;
    let n = basis.dim();
    let mut s = DMatrix::zeros(n, n);
    let mut m = DVector::zeros(n);
    let mut rhs = DVector::zeros(n);
    let mut mean_v = 0.0;
    let mut phi = vec![0.0; n];
    let mut g = vec![crate::Point::zeros(); n];
    for (x, &w) in rule.points.iter().zip(&rule.weights) {
        basis.eval_into(x, &mut phi);
        basis.grad_into(x, &mut g);
        let kgv = k * v.grad(x);
        mean_v += w * v.value(x);
        for i in 0..n {
            m[i] += w * phi[i];
            rhs[i] += w * kgv.dot(&g[i]);
            let kgi = k * g[i];
            for j in 0..n {
                s[(i, j)] += w * kgi.dot(&g[j]);
            }
        }
    }
    let s = (&s + s.transpose()) * 0.5;
    let rhs = DMatrix::from_column_slice(n, 1, rhs.as_slice());
    let x = solve_with_mean(&s, &m, &rhs, &DVector::from_element(1, mean_v))?;
    let coeffs = x.column(0).into_owned();
    Ok((basis, coeffs))
}

/// Reconstruction `P` and consistency `G = P^t S_{k+1} P`.
pub fn build_reconstruction(
    space: &LocalSpace,
    k: &Tensor,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_spd(k)?;
    let nk = space.n_cell();
    let s1 = space.stiffness(k);
    let et = cell_selector(space);
    // rhs = S[:, :nk] E_T + sum_F Flux_F^t (E_F - R_F E_T)
    let mut rhs = s1.columns(0, nk) * &et;
    for (i, e) in space.edges.iter().enumerate() {
        let flux = e.normal_flux(k);
        let diff = edge_selector(space, i) - &e.restriction * &et;
        rhs += flux.transpose() * diff;
    }
    let mut c = DVector::zeros(space.ndof());
    c.rows_mut(0, nk).copy_from(&space.means.rows(0, nk));
    let p = solve_with_mean(&s1, &space.means, &rhs, &c)?;
    let g = p.transpose() * &s1 * &p;
    Ok((p.clone(), (&g + g.transpose()) * 0.5))
}

/// `delta_T = pi_T^k (P v) - v_T` and `delta_TF = pi_F^k (P v) - v_F`.
pub fn build_difference_ops(
    space: &LocalSpace,
    p: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
    let nk = space.n_cell();
    let mkk = space.mass.view((0, 0), (nk, nk)).into_owned();
    let chol = mkk
        .cholesky()
        .ok_or_else(|| HhoError::SingularLocal("cell mass matrix".into()))?;
    let proj = chol.solve(&(space.mass.rows(0, nk) * p));
    let dt = proj - cell_selector(space);
    let mut dfs = Vec::with_capacity(space.num_edges());
    for (i, e) in space.edges.iter().enumerate() {
        let chol = e
            .mass
            .clone()
            .cholesky()
            .ok_or_else(|| HhoError::SingularLocal("edge mass matrix".into()))?;
        dfs.push(chol.solve(&(&e.trace * p)) - edge_selector(space, i));
    }
    Ok((dt, dfs))
}

/// `S = sum_F (K_TF / d_TF) D_F^t M_F D_F` with `D_F = delta_TF - pi_F^k delta_T`.
pub fn build_stabilization(
    space: &LocalSpace,
    k: &Tensor,
    delta_cell: &DMatrix<f64>,
    delta_edges: &[DMatrix<f64>],
) -> DMatrix<f64> {
    let n = space.ndof();
    let mut s = DMatrix::zeros(n, n);
    for (e, df) in space.edges.iter().zip(delta_edges) {
        let d = df - &e.restriction * delta_cell;
        let w = e.k_nn(k) / e.d_tf;
        s += d.transpose() * &e.mass * &d * w;
    }
    (&s + s.transpose()) * 0.5
}

/// `s_T(v, v)` evaluated edge by edge from the difference operators, which
/// avoids the cancellation of `v^t S v` when `v` is close to the kernel.
pub fn stabilization_energy(
    space: &LocalSpace,
    k: &Tensor,
    ops: &LocalOperatorSet,
    v: &DVector<f64>,
) -> f64 {
    let dt = &ops.delta_cell * v;
    space
        .edges
        .iter()
        .zip(&ops.delta_edges)
        .map(|(e, df)| {
            let d = df * v - &e.restriction * &dt;
            e.k_nn(k) / e.d_tf * d.dot(&(&e.mass * &d))
        })
        .sum()
}

pub fn build_local_operators(space: &LocalSpace, k: &Tensor) -> Result<LocalOperatorSet> {
    let (p, g) = build_reconstruction(space, k)?;
    let (dt, dfs) = build_difference_ops(space, &p)?;
    let s = build_stabilization(space, k, &dt, &dfs);
    let a = &g + &s;
    Ok(LocalOperatorSet {
        k: space.k,
        reconstruction: p,
        consistency: g,
        delta_cell: dt,
        delta_edges: dfs,
        stabilization: s,
        bilinear: a,
    })
}

pub fn build_local_bilinear(
    mesh: &Mesh,
    cell: usize,
    k_t: &Tensor,
    k: usize,
) -> Result<LocalOperatorSet> {
    let space = LocalSpace::new(mesh, cell, k)?;
    build_local_operators(&space, k_t)
}

/// Matrix `N` with `v^t N v = |v|_{1,K,T}^2`.
pub fn seminorm_matrix(space: &LocalSpace, k: &Tensor) -> DMatrix<f64> {
    let nk = space.n_cell();
    let et = cell_selector(space);
    let s1 = space.stiffness(k);
    let skk = s1.view((0, 0), (nk, nk));
    let mut n = et.transpose() * skk * &et;
    for (i, e) in space.edges.iter().enumerate() {
        let d = edge_selector(space, i) - &e.restriction * &et;
        n += d.transpose() * &e.mass * &d * (e.k_nn(k) / e.d_tf);
    }
    (&n + n.transpose()) * 0.5
}

/// `|v|_{1,K,T}^2` from the cell gradient and the edge jumps.
pub fn seminorm_squared(space: &LocalSpace, k: &Tensor, v: &DVector<f64>) -> f64 {
    let nk = space.n_cell();
    let vt = v.rows(0, nk);
    let s1 = space.stiffness(k);
    let mut n = vt.dot(&(s1.view((0, 0), (nk, nk)) * vt));
    for (i, e) in space.edges.iter().enumerate() {
        let d = v.rows(space.edge_offset(i), space.n_edge()) - &e.restriction * vt;
        n += e.k_nn(k) / e.d_tf * d.dot(&(&e.mass * &d));
    }
    n
}

pub fn local_seminorm(v: &LocalDofVector, k: &Tensor, space: &LocalSpace) -> f64 {
    seminorm_squared(space, k, &v.to_flat()).max(0.0).sqrt()
}

/// `a_T(v, v)` from `P v` and the edge differences.
pub fn local_energy(
    space: &LocalSpace,
    k: &Tensor,
    ops: &LocalOperatorSet,
    v: &DVector<f64>,
) -> f64 {
    let pv = &ops.reconstruction * v;
    pv.dot(&(space.stiffness(k) * &pv)) + stabilization_energy(space, k, ops, v)
}
