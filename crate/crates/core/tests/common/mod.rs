//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use hho::field::DiffusionField;
use hho::local::{build_local_operators, LocalSpace};
use hho::mesh::{Mesh, Polygon};
use hho::system::{project_on_edge, HybridVector};
use hho::{Point, Tensor};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// 7-point degree-5 rule on the reference triangle, barycentric `(a, a, 1 - 2a)`.
fn radon_rule() -> [(f64, f64, f64); 7] {
    let s = 15f64.sqrt();
    let (a1, a2) = ((6.0 - s) / 21.0, (6.0 + s) / 21.0);
    let (w1, w2) = ((155.0 - s) / 1200.0, (155.0 + s) / 1200.0);
    [
        (1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0),
        (a1, a1, w1),
        (a1, 1.0 - 2.0 * a1, w1),
        (1.0 - 2.0 * a1, a1, w1),
        (a2, a2, w2),
        (a2, 1.0 - 2.0 * a2, w2),
        (1.0 - 2.0 * a2, a2, w2),
    ]
}

/// Sum over the uniform `4^depth` subdivision, accumulated per subtree.
fn triangle_sum(
    t: [Point; 3],
    depth: u32,
    m: usize,
    f: &dyn Fn(&Point, &mut [f64]),
    acc: &mut [f64],
    buf: &mut [f64],
) {
    if depth > 0 {
        let (ab, bc, ca) = (
            (t[0] + t[1]) / 2.0,
            (t[1] + t[2]) / 2.0,
            (t[2] + t[0]) / 2.0,
        );
        let mut local = vec![0.0; m];
        for sub in [[t[0], ab, ca], [ab, t[1], bc], [ca, bc, t[2]], [bc, ca, ab]] {
            triangle_sum(sub, depth - 1, m, f, &mut local, buf);
        }
        acc.iter_mut().zip(&local).for_each(|(a, l)| *a += l);
        return;
    }
    let area = 0.5 * ((t[1] - t[0]).perp(&(t[2] - t[0]))).abs();
    let mut local = vec![0.0; m];
    for (l1, l2, w) in radon_rule() {
        let x = t[0] * (1.0 - l1 - l2) + t[1] * l1 + t[2] * l2;
        buf.iter_mut().for_each(|v| *v = 0.0);
        f(&x, buf);
        for i in 0..m {
            local[i] += w * buf[i];
        }
    }
    acc.iter_mut().zip(&local).for_each(|(a, l)| *a += area * l);
}

/// `int_P f` for a vector-valued `f`, by uniform subdivision of the
/// centroid fan at two depths and Richardson extrapolation of the `h^6` term.
pub fn integrate_polygon(poly: &Polygon, m: usize, f: &dyn Fn(&Point, &mut [f64])) -> Vec<f64> {
    let n = poly.vertices.len();
    let c = poly.centroid;
    let mut buf = vec![0.0; m];
    let mut run = |depth| {
        let mut acc = vec![0.0; m];
        for i in 0..n {
            let t = [c, poly.vertices[i], poly.vertices[(i + 1) % n]];
            triangle_sum(t, depth, m, f, &mut acc, &mut buf);
        }
        acc
    };
    let (coarse, fine) = (run(5), run(6));
    coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (64.0 * f - c) / 63.0)
        .collect()
}

pub fn integrate_polygon_scalar(poly: &Polygon, f: impl Fn(&Point) -> f64) -> f64 {
    integrate_polygon(poly, 1, &|x, out| out[0] = f(x))[0]
}

/// Composite 3-point Gauss on `2^depth` pieces of `[a, b]`.
pub fn integrate_segment(
    a: &Point,
    b: &Point,
    m: usize,
    f: &dyn Fn(&Point, &mut [f64]),
) -> Vec<f64> {
    let r = (0.6f64).sqrt();
    let gauss = [(-r, 5.0 / 9.0), (0.0, 8.0 / 9.0), (r, 5.0 / 9.0)];
    let pieces = 256;
    let len = (b - a).norm();
    let mut acc = vec![0.0; m];
    let mut buf = vec![0.0; m];
    for p in 0..pieces {
        let (s0, s1) = (p as f64 / pieces as f64, (p + 1) as f64 / pieces as f64);
        for (g, w) in gauss {
            let s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * g;
            let x = a + (b - a) * s;
            buf.iter_mut().for_each(|v| *v = 0.0);
            f(&x, &mut buf);
            for i in 0..m {
                acc[i] += 0.5 * (s1 - s0) * len * w * buf[i];
            }
        }
    }
    acc
}

/// Convex polygon with vertices on a random, sheared ellipse.
pub fn random_cell(rng: &mut impl Rng) -> Polygon {
    let n = rng.gen_range(3..=8);
    let mut angles: Vec<f64> = (0..n)
        .map(|i| (i as f64 + rng.gen_range(0.1..0.9)) * std::f64::consts::TAU / n as f64)
        .collect();
    angles.sort_by(f64::total_cmp);
    let aspect = 10f64.powf(rng.gen_range(0.0..1.5));
    let theta = rng.gen_range(0.0..std::f64::consts::PI);
    let (s, c) = theta.sin_cos();
    let rot = Tensor::new(c, -s, s, c);
    let scale = 10f64.powf(rng.gen_range(-2.0..0.0));
    let shift = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let pts = angles
        .iter()
        .map(|a| shift + rot * Point::new(a.cos() * aspect.sqrt(), a.sin() / aspect.sqrt()) * scale)
        .collect();
    Polygon::new(pts).expect("convex polygon")
}

/// Random SPD tensor with eigenvalues in `[1e-3, 1e3]`.
pub fn random_spd(rng: &mut impl Rng) -> Tensor {
    random_spd_with_ratio(rng, 1e6)
}

/// Random SPD tensor whose anisotropy ratio is at most `max_ratio`.
pub fn random_spd_with_ratio(rng: &mut impl Rng, max_ratio: f64) -> Tensor {
    let base = 10f64.powf(rng.gen_range(-3.0..3.0) * 0.5);
    let r = 10f64.powf(rng.gen_range(0.0..max_ratio.log10()));
    let (l1, l2) = (base * r.sqrt(), base / r.sqrt());
    let t = rng.gen_range(0.0..std::f64::consts::PI);
    let (s, c) = t.sin_cos();
    let r = Tensor::new(c, -s, s, c);
    let k = r * Tensor::new(l1, 0.0, 0.0, l2) * r.transpose();
    (k + k.transpose()) * 0.5
}

/// Solves the full (uncondensed) hybrid system densely, boundary edges
/// fixed to `pi_F^k g`.
pub fn anisotropy(k: &Tensor) -> f64 {
    let ev = nalgebra::SymmetricEigen::new(*k).eigenvalues;
    ev.max() / ev.min()
}

pub fn solve_uncondensed(
    mesh: &Mesh,
    diffusion: &DiffusionField,
    k: usize,
    f: impl Fn(usize, &Point) -> f64,
    g: impl Fn(&Point) -> f64,
) -> HybridVector {
    let nk = (k + 1) * (k + 2) / 2;
    let nf = k + 1;
    let n_cells = mesh.num_cells() * nk;
    let n = n_cells + mesh.num_edges() * nf;
    let mut a = DMatrix::zeros(n, n);
    let mut b = DVector::zeros(n);
    for c in 0..mesh.num_cells() {
        let space = LocalSpace::new(mesh, c, k).unwrap();
        let ops = build_local_operators(&space, &diffusion.at(mesh, c)).unwrap();
        let load = space.load(|x| f(c, x));
        let mut idx: Vec<usize> = (0..nk).map(|i| c * nk + i).collect();
        for &e in &mesh.cells[c].edges {
            idx.extend((0..nf).map(|i| n_cells + e * nf + i));
        }
        for (i, &gi) in idx.iter().enumerate() {
            if i < nk {
                b[gi] += load[i];
            }
            for (j, &gj) in idx.iter().enumerate() {
                a[(gi, gj)] += ops.bilinear[(i, j)];
            }
        }
    }
    let mut fixed = vec![None; n];
    for (e, edge) in mesh.edges.iter().enumerate() {
        if edge.is_boundary() {
            let ge = project_on_edge(mesh, e, k, &g).unwrap();
            for i in 0..nf {
                fixed[n_cells + e * nf + i] = Some(ge[i]);
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
    let mut rhs = DVector::from_fn(free.len(), |r, _| b[free[r]]);
    for (r, &i) in free.iter().enumerate() {
        for (j, v) in fixed.iter().enumerate() {
            if let Some(v) = v {
                rhs[r] -= a[(i, j)] * v;
            }
        }
    }
    let af = DMatrix::from_fn(free.len(), free.len(), |r, s| a[(free[r], free[s])]);
    let x = af.lu().solve(&rhs).expect("nonsingular uncondensed system");
    let mut full = vec![0.0; n];
    for (i, v) in fixed.iter().enumerate() {
        if let Some(v) = v {
            full[i] = *v;
        }
    }
    for (r, &i) in free.iter().enumerate() {
        full[i] = x[r];
    }
    HybridVector {
        k,
        cell_values: full[..n_cells].to_vec(),
        edge_values: full[n_cells..].to_vec(),
    }
}
