use std::sync::OnceLock;

use crate::mesh::{Mesh, Polygon};
use crate::Point;

/// Quadrature rule on a cell or an edge (points in physical coordinates).
#[derive(Clone, Debug)]
pub struct QuadRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub exactness: usize,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .sum()
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }
}

const MAX_GAUSS_POINTS: usize = 64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (&'static [f64], &'static [f64]) {
    static TABLE: OnceLock<Vec<(Vec<f64>, Vec<f64>)>> = OnceLock::new();
    assert!(
        (1..=MAX_GAUSS_POINTS).contains(&n),
        "unsupported Gauss rule size {n}"
    );
    let table = TABLE.get_or_init(|| (1..=MAX_GAUSS_POINTS).map(compute_gauss_legendre).collect());
    let (x, w) = &table[n - 1];
    (x, w)
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Rule on the segment `[a, b]`, exact for polynomials of degree `exactness`.
pub fn segment_quadrature(a: &Point, b: &Point, exactness: usize) -> QuadRule {
    let n = (exactness + 2) / 2;
    let (x, w) = gauss_legendre(n.max(1));
    let half = (b - a).norm() * 0.5;
    let mid = (a + b) * 0.5;
    let dir = (b - a) * 0.5;
    QuadRule {
        points: x.iter().map(|&t| mid + dir * t).collect(),
        weights: w.iter().map(|&wi| wi * half).collect(),
        exactness,
    }
}

/// Collapsed (Duffy) Gauss product rule on a triangle, exact to `exactness`.
pub fn triangle_quadrature(tri: &[Point; 3], exactness: usize, out: &mut QuadRule) {
    let n = exactness.div_ceil(2) + 1;
    let (x, w) = gauss_legendre(n);
    let [a, b, c] = *tri;
    let (ab, bc) = (b - a, c - b);
    let twice_area = ab.x * bc.y - ab.y * bc.x;
    for (xu, wu) in x.iter().zip(w) {
        let u = 0.5 * (xu + 1.0);
        for (xv, wv) in x.iter().zip(w) {
            let v = 0.5 * (xv + 1.0);
            out.points.push(a + (ab + bc * v) * u);
            out.weights.push(0.25 * wu * wv * u * twice_area);
        }
    }
}

/// Fan triangulation from the centroid with a Gauss rule on every triangle.
pub fn polygon_quadrature(poly: &Polygon, exactness: usize) -> QuadRule {
    let n = exactness.div_ceil(2) + 1;
    let mut rule = QuadRule {
        points: Vec::with_capacity(poly.num_edges() * n * n),
        weights: Vec::with_capacity(poly.num_edges() * n * n),
        exactness,
    };
    for tri in poly.fan() {
        triangle_quadrature(&tri, exactness, &mut rule);
    }
    rule
}

pub fn cell_quadrature(mesh: &Mesh, cell: usize, exactness: usize) -> QuadRule {
    polygon_quadrature(&mesh.cells[cell].geometry, exactness)
}

pub fn edge_quadrature(mesh: &Mesh, edge: usize, exactness: usize) -> QuadRule {
    let e = &mesh.edges[edge];
    segment_quadrature(
        &mesh.vertices[e.vertices[0]],
        &mesh.vertices[e.vertices[1]],
        exactness,
    )
}
