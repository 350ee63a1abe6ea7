//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

mod common;

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use common::{
    anisotropy, integrate_polygon, integrate_segment, random_cell, random_spd,
    random_spd_with_ratio, solve_uncondensed,
};
use hho::analysis::{convergence_rates, flatness_rates, verify_transport, ErrorReport};
use hho::cases::{run_level, ExactSolution, MeshFamily};
use hho::field::{fn_field, DiffusionField, ScalarField};
use hho::local::{build_local_operators, elliptic_projector, stabilization_energy, LocalSpace};
use hho::mesh::{
    estimate_skew_map, generate_cartesian, generate_hexagonal, generate_locally_refined, Mesh,
    Polygon,
};
use hho::poly::{
    edge_normal_flux_matrix, polygon_quadrature, segment_quadrature, weighted_stiffness, CellBasis,
    EdgeBasis,
};
use hho::system::{
    assemble, inverse_norm_1_estimate, recover_cells, solve, Problem, SolverOptions,
};
use hho::{Point, Tensor};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn slope(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    (y1 / y0).ln() / (x1 / x0).ln()
}

/// Least-squares slope of `ln y` against `ln x`.
fn fitted_exponent(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn family_reports(
    meshes: &[Mesh],
    diffusion: &DiffusionField,
    k: usize,
    cn: bool,
) -> Vec<ErrorReport> {
    meshes
        .iter()
        .map(|m| {
            run_level(
                m,
                diffusion,
                &ExactSolution::Cosine,
                k,
                &SolverOptions::default(),
                cn,
            )
            .expect("level solve")
            .report
        })
        .collect()
}

fn skewed_meshes() -> &'static Vec<Mesh> {
    static M: OnceLock<Vec<Mesh>> = OnceLock::new();
    M.get_or_init(|| {
        (1..=4)
            .map(|l| MeshFamily::SkewedHexagonal.mesh(l).unwrap())
            .collect()
    })
}

/// Cartesian `n = 4..32`, `K = Id`, per `k`, with condition numbers.
fn cartesian_runs() -> &'static Vec<Vec<ErrorReport>> {
    static R: OnceLock<Vec<Vec<ErrorReport>>> = OnceLock::new();
    R.get_or_init(|| {
        let meshes: Vec<Mesh> = [4, 8, 16, 32]
            .iter()
            .map(|&n| generate_cartesian(n))
            .collect();
        (0..=3)
            .map(|k| family_reports(&meshes, &DiffusionField::identity(), k, true))
            .collect()
    })
}

/// Skewed family, `K = Id`, per `k`, with condition numbers.
fn skewed_runs() -> &'static Vec<Vec<ErrorReport>> {
    static R: OnceLock<Vec<Vec<ErrorReport>>> = OnceLock::new();
    R.get_or_init(|| {
        (0..=3)
            .map(|k| family_reports(skewed_meshes(), &DiffusionField::identity(), k, true))
            .collect()
    })
}

fn exactness_cells() -> Vec<Polygon> {
    let mut cells = Vec::new();
    let mut take = |m: Mesh, picks: &[usize]| {
        for &p in picks {
            cells.push(m.cells[p % m.num_cells()].geometry.clone());
        }
    };
    take(generate_cartesian(4), &[0, 5, 15]);
    for s in [1.0, 8.0, 64.0] {
        let m = generate_hexagonal(8, s);
        let n = m.num_cells();
        take(m, &[0, n / 3, n / 2, n - 1, 7]);
    }
    let m = generate_locally_refined(4, 2);
    let mut hanging: Vec<usize> = (0..m.num_cells())
        .filter(|&c| m.cells[c].edges.len() > 4)
        .collect();
    hanging.truncate(3);
    hanging.push(m.num_cells() - 1);
    take(m, &hanging);
    cells
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let cells = exactness_cells();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_raw, mut worst_coef, mut worst_stab) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..=3 {
        for poly in &cells {
            let kt = random_spd_with_ratio(&mut rng, 1e3);
            let rho = anisotropy(&kt);
            let space = LocalSpace::from_polygon(poly, k).map_err(|e| e.to_string())?;
            let ops = build_local_operators(&space, &kt).map_err(|e| e.to_string())?;
            let tr = ops.stabilization.trace();
            for i in 0..space.basis.dim() {
                let w = |x: &Point| space.basis.eval(x)[i];
                let v = space
                    .interpolate(poly, w)
                    .map_err(|e| e.to_string())?
                    .to_flat();
                let p = &ops.reconstruction * &v;
                for (j, pj) in p.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    let err = (pj - target).abs();
                    worst_raw = worst_raw.max(err);
                    worst_coef = worst_coef.max(err / rho);
                }
                worst_stab = worst_stab.max(stabilization_energy(&space, &kt, &ops, &v) / tr);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(
        worst_raw <= 1e-9 && worst_stab <= 1e-18 && secs < 30.0,
        format!(
            "{} cells, coefficient error {worst_raw:.2e} raw, {worst_coef:.2e} per unit anisotropy, s/tr(S) {worst_stab:.2e}",
            cells.len()
        ),
    )
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let meshes = [
        generate_cartesian(4),
        generate_hexagonal(8, 8.0),
        generate_hexagonal(8, 64.0),
        generate_locally_refined(4, 2),
        MeshFamily::SkewedHexagonal.mesh(1).unwrap(),
    ];
    let mut worst = 0.0f64;
    for t in 0..50 {
        let mesh = &meshes[t % meshes.len()];
        let cell = rng.gen_range(0..mesh.num_cells());
        let kt = random_spd_with_ratio(&mut rng, 1e3);
        let phi = if t % 2 == 0 {
            estimate_skew_map(mesh, cell)
                .map_err(|e| e.to_string())?
                .matrix
        } else {
            let s = 10f64.powf(rng.gen_range(-1.0..1.0));
            let a = rng.gen_range(0.0..std::f64::consts::PI);
            let (sn, cs) = a.sin_cos();
            let r = Tensor::new(cs, -sn, sn, cs);
            r * Tensor::new(s, rng.gen_range(-0.5..0.5), 0.0, 1.0 / s)
        };
        let res =
            verify_transport(mesh, cell, &phi, &kt, t % 4, &mut rng).map_err(|e| e.to_string())?;
        worst = worst.max(res.max());
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(
        worst <= 1e-9 && secs < 30.0,
        format!("50 triples, max residual {worst:.2e}"),
    )
}

fn criterion_3() -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for (k, reps) in cartesian_runs().iter().enumerate() {
        let (a, b) = (&reps[2], &reps[3]);
        let s = slope(a.h, b.h, a.energy_error, b.energy_error);
        ok &= s >= k as f64 + 0.85;
        lines.push(format!("k={k} slope {s:.3}"));
    }
    ensure(ok, lines.join(", "))
}

fn criterion_4() -> Check {
    let meshes: Vec<Mesh> = (1..=4)
        .map(|l| MeshFamily::LocallyRefined.mesh(l).unwrap())
        .collect();
    let mut lines = Vec::new();
    let mut ok = true;
    for k in [1usize, 3] {
        let mut finest_e = Vec::new();
        let mut finest_h1 = Vec::new();
        let mut min_slope = f64::INFINITY;
        for lambda in [1e-6, 1.0, 1e6] {
            let reps = family_reports(&meshes, &DiffusionField::Layered { lambda }, k, false);
            for r in convergence_rates(&reps).map_err(|e| e.to_string())? {
                min_slope = min_slope.min(r.energy.unwrap_or(f64::NEG_INFINITY));
            }
            finest_e.push(reps[3].energy_error);
            finest_h1.push(reps[3].h1_error);
        }
        let spread = |v: &[f64]| {
            v.iter().copied().fold(0.0, f64::max) / v.iter().copied().fold(f64::INFINITY, f64::min)
        };
        let (se, sh) = (spread(&finest_e), spread(&finest_h1));
        ok &= min_slope >= k as f64 + 0.8 && se <= 1e2;
        if k == 1 {
            ok &= sh <= 90.0;
        }
        lines.push(format!(
            "k={k} min energy slope {min_slope:.3}, energy spread {se:.2}, H1 spread {sh:.2}"
        ));
    }
    ensure(ok, lines.join("; "))
}

fn criterion_5() -> Check {
    let fl: Vec<f64> = skewed_runs()[0].iter().map(|r| r.flatness).collect();
    let mut lines = vec![format!("fl_h {:.1}..{:.1}", fl[0], fl[fl.len() - 1])];
    let mut ok = fl[0] > 5.0 && fl[fl.len() - 1] < 140.0;
    for (k, reps) in skewed_runs().iter().enumerate() {
        let rates = flatness_rates(reps, |r| r.energy_error).map_err(|e| e.to_string())?;
        let vals: Vec<f64> = rates.iter().map(|r| r.unwrap_or(f64::INFINITY)).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        ok &= vals.iter().all(|&r| r <= 2.0) && mean <= 1.0;
        let shown: Vec<String> = vals.iter().map(|r| format!("{r:.2}")).collect();
        lines.push(format!("k={k} rates [{}] mean {mean:.2}", shown.join(" ")));
    }
    ensure(ok, lines.join("; "))
}

fn cn_exponent(reps: &[ErrorReport]) -> f64 {
    let h: Vec<f64> = reps.iter().map(|r| r.h).collect();
    let cn: Vec<f64> = reps
        .iter()
        .map(|r| r.condition_number.unwrap_or(f64::NAN))
        .collect();
    fitted_exponent(&h, &cn)
}

fn criterion_6() -> Check {
    let mut ok = true;
    let mut lines = Vec::new();
    for (k, reps) in cartesian_runs().iter().enumerate() {
        let e = cn_exponent(reps);
        ok &= (-2.5..=-1.5).contains(&e);
        lines.push(format!("cartesian k={k} {e:.2}"));
    }
    for (k, reps) in skewed_runs().iter().enumerate() {
        let e = cn_exponent(reps);
        ok &= (-5.0..=-3.0).contains(&e);
        lines.push(format!("skewed k={k} {e:.2}"));
    }
    let d: Vec<f64> = (1..=40).map(|i| (i as f64).powi(3)).collect();
    let est = inverse_norm_1_estimate(d.len(), |v| {
        Ok(v.iter().zip(&d).map(|(a, b)| a / b).collect())
    })
    .map_err(|e| e.to_string())?;
    let exact = d.iter().copied().fold(0.0, f64::max) * est;
    ok &= est == 1.0 && exact == 64000.0;
    lines.push(format!("diagonal estimate {est}"));
    ensure(ok, lines.join(", "))
}

fn criterion_7() -> Check {
    let diffusion = DiffusionField::diagonal(1e6);
    let regular: Vec<Mesh> = (1..=4)
        .map(|l| MeshFamily::Hexagonal { stretch: 1.0 }.mesh(l).unwrap())
        .collect();
    let skewed = skewed_meshes();
    let mut ok = true;
    let mut lines = Vec::new();
    let rs = family_reports(skewed, &diffusion, 0, false);
    let rr = family_reports(&regular, &diffusion, 0, false);
    for (l, (s, r)) in rs.iter().zip(&rr).enumerate() {
        ok &= s.energy_error < r.energy_error;
        lines.push(format!(
            "k=0 level {} {:.3e} vs {:.3e}",
            l + 1,
            s.energy_error,
            r.energy_error
        ));
    }
    for k in 1..=3 {
        let s = &family_reports(&skewed[3..], &diffusion, k, false)[0];
        let r = &family_reports(&regular[3..], &diffusion, k, false)[0];
        ok &= s.energy_error < r.energy_error;
        lines.push(format!(
            "k={k} finest {:.3e} vs {:.3e}",
            s.energy_error, r.energy_error
        ));
    }
    ensure(ok, lines.join("; "))
}

fn criterion_8() -> Check {
    let skewed = &skewed_meshes()[0];
    let cell = (0..skewed.num_cells())
        .max_by(|&a, &b| {
            let fa = skewed.cells[a].geometry.flatness().unwrap();
            let fb = skewed.cells[b].geometry.flatness().unwrap();
            fa.total_cmp(&fb)
        })
        .unwrap();
    let base = &skewed.cells[cell].geometry;
    let kt = Tensor::new(10.0, 2.0, 2.0, 1.0);
    let x0 = Point::new(0.3, 0.2);
    let pi = std::f64::consts::PI;
    let v = fn_field(
        |x: &Point| (pi * x.x).cos() * (pi * x.y).cos(),
        |x: &Point| {
            Point::new(
                -pi * (pi * x.x).sin() * (pi * x.y).cos(),
                -pi * (pi * x.x).cos() * (pi * x.y).sin(),
            )
        },
    );
    let energy = |g: Point| g.dot(&(kt * g));
    let mut ok = true;
    let mut lines = Vec::new();
    for k in 0..=2 {
        let (mut vol, mut face) = (Vec::new(), Vec::new());
        for j in 0..6 {
            let s = 0.5f64.powi(j);
            let pts = base
                .vertices
                .iter()
                .map(|p| x0 + (p - base.centroid) * s)
                .collect();
            let poly = Polygon::new(pts).map_err(|e| e.to_string())?;
            let (b, c) = elliptic_projector(&v, k + 1, &kt, &poly).map_err(|e| e.to_string())?;
            let err = |x: &Point| v.grad(x) - b.grad_poly(c.as_slice(), x);
            let rule = polygon_quadrature(&poly, 2 * k + 16);
            vol.push((rule.integrate(|x| energy(err(x))) / poly.area).sqrt());
            let mut f = 0.0f64;
            for (i, e) in poly.edges.iter().enumerate() {
                let r = segment_quadrature(&e.start, &e.end, 2 * k + 16);
                f = f.max(poly.d_tf(i) * r.integrate(|x| energy(err(x))));
            }
            face.push((f / poly.area).sqrt());
        }
        let last = |q: &[f64]| {
            let n = q.len();
            slope(1.0, 0.5, q[n - 3], q[n - 2]).min(slope(1.0, 0.5, q[n - 2], q[n - 1]))
        };
        let (ov, of) = (last(&vol), last(&face));
        ok &= ov >= k as f64 + 0.8 && of >= k as f64 + 0.8;
        lines.push(format!("k={k} cell order {ov:.3}, face order {of:.3}"));
    }
    ensure(
        ok,
        format!("fl_T {:.1}: {}", base.flatness().unwrap(), lines.join(", ")),
    )
}

fn rel_max(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = b.amax().max(f64::MIN_POSITIVE);
    (a - b).amax() / scale
}

/// Local matrices of `poly` against the subdivision oracle, max relative error.
fn quadrature_mismatch(poly: &Polygon, k: usize, kt: &Tensor) -> Result<f64, String> {
    let space = LocalSpace::from_polygon(poly, k).map_err(|e| e.to_string())?;
    let basis = &space.basis;
    let n = basis.dim();
    let vals = integrate_polygon(poly, n * n * 4 + n, &|x, out| {
        let v = basis.eval(x);
        let g = basis.grad(x);
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = v[i] * v[j];
                out[n * n + i * n + j] = g[i].x * g[j].x;
                out[2 * n * n + i * n + j] = g[i].x * g[j].y;
                out[3 * n * n + i * n + j] = g[i].y * g[j].y;
            }
            out[4 * n * n + i] = v[i];
        }
    });
    let block = |o: usize| DMatrix::from_fn(n, n, |i, j| vals[o * n * n + i * n + j]);
    let mut worst = rel_max(&space.mass, &block(0));
    worst = worst.max(rel_max(&space.stiff_xx, &block(1)));
    worst = worst.max(rel_max(&space.stiff_xy, &block(2)));
    worst = worst.max(rel_max(&space.stiff_yy, &block(3)));
    let means = DMatrix::from_fn(n, 1, |i, _| vals[4 * n * n + i]);
    worst = worst.max(rel_max(
        &DMatrix::from_column_slice(n, 1, space.means.as_slice()),
        &means,
    ));

    let load_fn = |x: &Point| (x.x * x.y).powi(k as i32 + 1) + x.y.powi(k as i32 + 3) - 0.5 * x.x;
    let nk = space.n_cell();
    let load = integrate_polygon(poly, nk, &|x, out| {
        let v = basis.eval(x);
        let f = load_fn(x);
        for i in 0..nk {
            out[i] = v[i] * f;
        }
    });
    let approx = space.load(load_fn);
    let exact_load = nalgebra::DVector::from_vec(load);
    worst = worst.max((approx - &exact_load).amax() / exact_load.amax().max(f64::MIN_POSITIVE));

    let nf = k + 1;
    for (e, pe) in space.edges.iter().zip(&poly.edges) {
        let m = nf * nf + 3 * nf * n;
        let vals = integrate_segment(&pe.start, &pe.end, m, &|x, out| {
            let mu = e.basis.eval(x);
            let v = basis.eval(x);
            let g = basis.grad(x);
            for p in 0..nf {
                for q in 0..nf {
                    out[p * nf + q] = mu[p] * mu[q];
                }
                for j in 0..n {
                    out[nf * nf + p * n + j] = mu[p] * v[j];
                    out[nf * nf + nf * n + p * n + j] = mu[p] * g[j].x;
                    out[nf * nf + 2 * nf * n + p * n + j] = mu[p] * g[j].y;
                }
            }
        });
        let mass = DMatrix::from_fn(nf, nf, |p, q| vals[p * nf + q]);
        let blk = |o: usize| DMatrix::from_fn(nf, n, |p, j| vals[nf * nf + o * nf * n + p * n + j]);
        worst = worst.max(rel_max(&e.mass, &mass));
        worst = worst.max(rel_max(&e.trace, &blk(0)));
        worst = worst.max(rel_max(&e.flux_x, &blk(1)));
        worst = worst.max(rel_max(&e.flux_y, &blk(2)));
    }

    let mesh = Mesh::from_vertex_loops(
        poly.vertices.clone(),
        vec![(0..poly.vertices.len()).collect()],
    )
    .map_err(|e| e.to_string())?;
    let cb = CellBasis::new(&mesh.cells[0].geometry, k + 1).map_err(|e| e.to_string())?;
    let ws = weighted_stiffness(&mesh, 0, kt, &cb, &cb).map_err(|e| e.to_string())?;
    let oracle = integrate_polygon(&mesh.cells[0].geometry, n * n, &|x, out| {
        let g = cb.grad(x);
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (kt * g[i]).dot(&g[j]);
            }
        }
    });
    worst = worst.max(rel_max(
        &ws,
        &DMatrix::from_fn(n, n, |i, j| oracle[i * n + j]),
    ));
    for &edge in &mesh.cells[0].edges {
        let me = &mesh.edges[edge];
        let (a, b) = (mesh.vertices[me.vertices[0]], mesh.vertices[me.vertices[1]]);
        let eb = EdgeBasis::new(&a, &b, &me.tangent, k).map_err(|e| e.to_string())?;
        let flux =
            edge_normal_flux_matrix(&mesh, 0, edge, kt, &cb, &eb).map_err(|e| e.to_string())?;
        let kn = kt * me.normals[0];
        let vals = integrate_segment(&a, &b, nf * n, &|x, out| {
            let mu = eb.eval(x);
            let g = cb.grad(x);
            for p in 0..nf {
                for j in 0..n {
                    out[p * n + j] = mu[p] * g[j].dot(&kn);
                }
            }
        });
        worst = worst.max(rel_max(
            &flux,
            &DMatrix::from_fn(nf, n, |p, j| vals[p * n + j]),
        ));
    }
    Ok(worst)
}

fn criterion_9() -> Check {
    let meshes = [
        ("cartesian", generate_cartesian(4)),
        ("hexagonal", generate_hexagonal(4, 4.0)),
        ("locref", generate_locally_refined(2, 1)),
    ];
    let kt = Tensor::new(5.0, 1.5, 1.5, 1.0);
    let diffusion = DiffusionField::Constant(kt);
    let u = ExactSolution::Cosine;
    let mut worst_solve = 0.0f64;
    for (_, mesh) in &meshes {
        for k in 0..=1 {
            let source = |_c: usize, x: &Point| u.source(&kt, x);
            let boundary = |x: &Point| u.value(x);
            let problem = Problem {
                mesh,
                diffusion: &diffusion,
                source: &source,
                boundary: &boundary,
                k,
            };
            let system = assemble(&problem).map_err(|e| e.to_string())?;
            let (x, _) = solve(&system, &SolverOptions::default()).map_err(|e| e.to_string())?;
            let condensed = recover_cells(&system, mesh, &x).map_err(|e| e.to_string())?;
            let full = solve_uncondensed(mesh, &diffusion, k, source, boundary);
            let all = |v: &hho::system::HybridVector| {
                v.cell_values
                    .iter()
                    .chain(&v.edge_values)
                    .copied()
                    .collect::<Vec<_>>()
            };
            let (a, b) = (all(&condensed), all(&full));
            let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let diff = a
                .iter()
                .zip(&b)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            worst_solve = worst_solve.max(diff / scale);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_quad = 0.0f64;
    for i in 0..10 {
        let poly = random_cell(&mut rng);
        let kt = random_spd(&mut rng);
        worst_quad = worst_quad.max(quadrature_mismatch(&poly, i % 4, &kt)?);
    }
    ensure(
        worst_solve <= 1e-10 && worst_quad <= 1e-11,
        format!(
            "condensed vs uncondensed {worst_solve:.2e}, quadrature vs oracle {worst_quad:.2e}"
        ),
    )
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 9] = [
        ("polynomial exactness", criterion_1),
        ("transport identities", criterion_2),
        ("cartesian convergence", criterion_3),
        ("locally refined anisotropy", criterion_4),
        ("skewed flatness growth", criterion_5),
        ("condition number scaling", criterion_6),
        ("stretch and diffusion interplay", criterion_7),
        ("elliptic projector decay", criterion_8),
        ("oracle equivalence", criterion_9),
    ];
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {id}: PASS {name}: {d} [{secs:.1} s]"),
            Err(d) => {
                failed += 1;
                println!("criterion {id}: FAIL {name}: {d} [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
