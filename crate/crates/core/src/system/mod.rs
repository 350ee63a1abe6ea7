//! Global unknowns, static condensation, sparse solves and condition
//! estimates.

mod assembly;
mod dofs;
mod solve;
mod vector;

pub use assembly::{
    assemble, project_on_edge, BoundaryFn, CellRecovery, CondensedSystem, Problem, SourceFn,
};
pub use dofs::DofMap;
pub use solve::{
    condition_number_1norm, factorize, inverse_norm_1_estimate, recover_cells, relative_residual,
    solve, solve_with, Factorization, SolverKind, SolverOptions,
};
pub use vector::HybridVector;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DiffusionField;
    use crate::mesh::{generate_cartesian, generate_hexagonal};
    use crate::Point;

    #[test]
    fn single_cell_has_empty_system() {
        let m = generate_cartesian(1);
        let k = DiffusionField::identity();
        let p = Problem {
            mesh: &m,
            diffusion: &k,
            source: &|_, _| 0.0,
            boundary: &|_| 0.0,
            k: 0,
        };
        let sys = assemble(&p).unwrap();
        assert_eq!(sys.dim(), 0);
        let (x, _) = solve(&sys, &SolverOptions::default()).unwrap();
        let u = recover_cells(&sys, &m, &x).unwrap();
        assert_eq!(u.cell(0), &[0.0]);
    }

    #[test]
    fn dimension_symmetry_and_solvers_agree() {
        let m = generate_hexagonal(3, 4.0);
        let k = DiffusionField::Constant(crate::Tensor::new(10.0, 1.0, 1.0, 2.0));
        let src = |_: usize, x: &Point| (x.x * 3.0).sin() + x.y;
        let g = |x: &Point| x.x * x.y;
        let p = Problem {
            mesh: &m,
            diffusion: &k,
            source: &src,
            boundary: &g,
            k: 1,
        };
        let sys = assemble(&p).unwrap();
        assert_eq!(sys.dim(), 2 * m.num_interior_edges());
        assert!(sys.asymmetry() <= 1e-13);
        let (xd, fd) = solve(&sys, &SolverOptions::default()).unwrap();
        let cg = SolverOptions {
            kind: SolverKind::Cg,
            ..Default::default()
        };
        let (xc, _) = solve(&sys, &cg).unwrap();
        let diff = xd
            .iter()
            .zip(&xc)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let scale = xd.iter().map(|a| a.abs()).fold(0.0, f64::max);
        assert!(diff <= 1e-8 * scale, "{diff:e}");
        assert!(relative_residual(&sys, &xd, &sys.rhs) <= 1e-10);
        let cn = condition_number_1norm(&sys, &fd).unwrap();
        assert!(cn > 1.0 && cn.is_finite());
        let mut buf = Vec::new();
        sys.write_coordinates(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().lines().count() > sys.dim());
    }
}
