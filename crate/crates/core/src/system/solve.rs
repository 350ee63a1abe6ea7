use std::str::FromStr;

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Llt;
use faer::{Mat, Side};
use nalgebra::DVector;

use super::assembly::CondensedSystem;
use super::vector::HybridVector;
use crate::mesh::Mesh;
use crate::{HhoError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    /// Sparse Cholesky with one step of iterative refinement.
    Direct,
    /// Jacobi-preconditioned conjugate gradients.
    Cg,
}

impl FromStr for SolverKind {
    type Err = HhoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" | "cholesky" => Ok(SolverKind::Direct),
            "cg" | "pcg" => Ok(SolverKind::Cg),
            other => Err(HhoError::Config(format!("unknown solver '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub kind: SolverKind,
    /// Relative residual target of the iterative solver.
    pub cg_tolerance: f64,
    /// Iteration cap as a multiple of the dimension.
    pub cg_max_iter_factor: usize,
    /// Accepted relative residual `|Ax - b| / |b|`.
    pub residual_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            kind: SolverKind::Direct,
            cg_tolerance: 1e-12,
            cg_max_iter_factor: 50,
            residual_tolerance: 1e-10,
        }
    }
}

/// A prepared solver for repeated solves with the same matrix.
pub enum Factorization {
    Direct(Llt<usize, f64>),
    Cg {
        inv_diag: Vec<f64>,
        options: SolverOptions,
    },
}

impl std::fmt::Debug for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Factorization::Direct(_) => f.write_str("Factorization::Direct"),
            Factorization::Cg { .. } => f.write_str("Factorization::Cg"),
        }
    }
}

pub fn factorize(system: &CondensedSystem, options: &SolverOptions) -> Result<Factorization> {
    match options.kind {
        SolverKind::Direct if system.dim() > 0 => {
            let llt = system
                .matrix
                .sp_cholesky(Side::Lower)
                .map_err(|e| HhoError::Solver(format!("Cholesky factorisation failed: {e:?}")))?;
            Ok(Factorization::Direct(llt))
        }
        _ => {
            let d = system.diagonal();
            if let Some(i) = d.iter().position(|&v| !(v > 0.0)) {
                return Err(HhoError::Solver(format!(
                    "nonpositive diagonal entry at {i}"
                )));
            }
            Ok(Factorization::Cg {
                inv_diag: d.iter().map(|v| 1.0 / v).collect(),
                options: *options,
            })
        }
    }
}

impl Factorization {
    /// One application of the solver, without refinement or residual checks.
    pub fn apply(&self, system: &CondensedSystem, b: &[f64]) -> Result<Vec<f64>> {
        match self {
            Factorization::Direct(llt) => {
                let mut x = Mat::from_fn(b.len(), 1, |i, _| b[i]);
                llt.solve_in_place(x.as_mut());
                Ok((0..b.len()).map(|i| x[(i, 0)]).collect())
            }
            Factorization::Cg { inv_diag, options } => pcg(system, inv_diag, b, options),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn pcg(
    system: &CondensedSystem,
    inv_diag: &[f64],
    b: &[f64],
    options: &SolverOptions,
) -> Result<Vec<f64>> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let max_iter = options.cg_max_iter_factor * n.max(1);
    for _ in 0..max_iter {
        system.matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(HhoError::Solver(
                "matrix is not positive definite (CG breakdown)".into(),
            ));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm(&r) <= options.cg_tolerance * bnorm {
            return Ok(x);
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(HhoError::Solver(format!(
        "CG did not converge in {max_iter} iterations"
    )))
}

pub fn relative_residual(system: &CondensedSystem, x: &[f64], b: &[f64]) -> f64 {
    let mut ax = vec![0.0; x.len()];
    system.matvec(x, &mut ax);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let bn = norm(b);
    if bn == 0.0 {
        norm(&r)
    } else {
        norm(&r) / bn
    }
}

/// Solves `A x = b` with a prepared factorisation: the direct path performs
/// one refinement step, both paths check the residual.
pub fn solve_with(
    system: &CondensedSystem,
    fact: &Factorization,
    b: &[f64],
    options: &SolverOptions,
) -> Result<Vec<f64>> {
    let mut x = fact.apply(system, b)?;
    if let Factorization::Direct(_) = fact {
        let mut ax = vec![0.0; x.len()];
        system.matvec(&x, &mut ax);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let dx = fact.apply(system, &r)?;
        x.iter_mut().zip(&dx).for_each(|(x, d)| *x += d);
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(HhoError::Solver("non-finite solution".into()));
    }
    let res = relative_residual(system, &x, b);
    if res > options.residual_tolerance {
        return Err(HhoError::Solver(format!(
            "relative residual {res:e} above {:e}",
            options.residual_tolerance
        )));
    }
    Ok(x)
}

pub fn solve(
    system: &CondensedSystem,
    options: &SolverOptions,
) -> Result<(Vec<f64>, Factorization)> {
    let fact = factorize(system, options)?;
    let x = solve_with(system, &fact, &system.rhs, options)?;
    Ok((x, fact))
}

/// Full hybrid solution: interior edges from `edge_solution`, boundary edges
/// from the Dirichlet data, cells by back-substitution.
pub fn recover_cells(
    system: &CondensedSystem,
    mesh: &Mesh,
    edge_solution: &[f64],
) -> Result<HybridVector> {
    if edge_solution.len() != system.dim() {
        return Err(HhoError::InvalidInput(format!(
            "edge solution of length {} for a system of dimension {}",
            edge_solution.len(),
            system.dim()
        )));
    }
    let k = system.k;
    let nf = k + 1;
    let mut u = HybridVector::zeros(mesh, k);
    u.edge_values.copy_from_slice(&system.boundary_values);
    for (s, &e) in system.dofs.interior_edges.iter().enumerate() {
        u.edge_mut(e)
            .copy_from_slice(&edge_solution[s * nf..(s + 1) * nf]);
    }
    for (c, rec) in system.recovery.iter().enumerate() {
        let mut uf = Vec::with_capacity(rec.coupling.ncols());
        for &e in &mesh.cells[c].edges {
            uf.extend_from_slice(u.edge(e));
        }
        let rhs = &rec.load - &rec.coupling * DVector::from_vec(uf);
        let ut = rec.cell_block.solve(&rhs);
        u.cell_mut(c).copy_from_slice(ut.as_slice());
    }
    Ok(u)
}

/// `|A|_1 * est(|A^{-1}|_1)` with the Hager–Higham estimator (at most 10
/// solves; `A` is symmetric so no transposed solves are needed).
pub fn condition_number_1norm(system: &CondensedSystem, fact: &Factorization) -> Result<f64> {
    let n = system.dim();
    if n == 0 {
        return Ok(0.0);
    }
    let inv_norm = inverse_norm_1_estimate(n, |v| fact.apply(system, v))?;
    Ok(system.norm_1() * inv_norm)
}

/// Hager–Higham estimate of `|A^{-1}|_1` for a symmetric `A`, given a solver.
pub fn inverse_norm_1_estimate(n: usize, inv: impl Fn(&[f64]) -> Result<Vec<f64>>) -> Result<f64> {
    let l1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
    let mut x = vec![1.0 / n as f64; n];
    let mut est = 0.0;
    let mut solves = 0;
    let mut last_j = usize::MAX;
    while solves + 2 <= 8 {
        let y = inv(&x)?;
        solves += 1;
        let new_est = l1(&y);
        if solves > 1 && new_est <= est {
            break;
        }
        est = new_est;
        let xi: Vec<f64> = y
            .iter()
            .map(|&v| if v >= 0.0 { 1.0 } else { -1.0 })
            .collect();
        let z = inv(&xi)?;
        solves += 1;
        let (j, zmax) = z.iter().enumerate().fold((0, 0.0f64), |(bj, bv), (i, &v)| {
            if v.abs() > bv {
                (i, v.abs())
            } else {
                (bj, bv)
            }
        });
        if zmax <= dot(&z, &x) || j == last_j {
            break;
        }
        last_j = j;
        x = vec![0.0; n];
        x[j] = 1.0;
    }
    // alternating test vector guards against unlucky cancellation
    let alt: Vec<f64> = (0..n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
        })
        .collect();
    let w = inv(&alt)?;
    Ok(est.max(2.0 * l1(&w) / (3.0 * n as f64)))
}
