use nalgebra::DVector;
use rand::Rng;

use crate::field::fn_field;
use crate::local::{build_reconstruction, elliptic_projector, LocalDofVector, LocalSpace};
use crate::mesh::{Mesh, Polygon};
use crate::poly::{exponents, l2_project_with, polygon_quadrature, segment_quadrature, CellBasis};
use crate::{HhoError, Point, Result, Tensor};

use super::skewness::transported_tensor;

/// Relative residuals of the transport identities on one cell.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TransportResiduals {
    /// `phi^t n^ = (J / J_F) n`.
    pub normal: f64,
    /// `(w, z)_T = J^{-1} (w^, z^)_T^`.
    pub cell_inner: f64,
    /// `(w, z)_F = J_F^{-1} (w^, z^)_F^`.
    pub edge_inner: f64,
    /// `(K grad w, grad z)_T = J^{-1} (K^ grad^ w^, grad^ z^)_T^`.
    pub grad_inner: f64,
    /// Elliptic projector commutes with the transport.
    pub projector: f64,
    /// Potential reconstruction commutes with the transport.
    pub reconstruction: f64,
}

impl TransportResiduals {
    pub fn max(&self) -> f64 {
        [
            self.normal,
            self.cell_inner,
            self.edge_inner,
            self.grad_inner,
            self.projector,
            self.reconstruction,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Polynomial with random coefficients in scaled monomials around `center`.
#[derive(Clone, Debug)]
struct RandomPoly {
    center: Point,
    scale: f64,
    terms: Vec<((usize, usize), f64)>,
}

impl RandomPoly {
    fn new(rng: &mut impl Rng, center: Point, scale: f64, degree: usize) -> Self {
        let terms = exponents(degree)
            .into_iter()
            .map(|e| (e, rng.gen_range(-1.0..1.0)))
            .collect();
        RandomPoly {
            center,
            scale,
            terms,
        }
    }

    fn eval(&self, x: &Point) -> f64 {
        let y = (x - self.center) / self.scale;
        self.terms
            .iter()
            .map(|&((a, b), c)| c * y.x.powi(a as i32) * y.y.powi(b as i32))
            .sum()
    }

    fn grad(&self, x: &Point) -> Point {
        let y = (x - self.center) / self.scale;
        let mut g = Point::zeros();
        for &((a, b), c) in &self.terms {
            if a > 0 {
                g.x += c * a as f64 * y.x.powi(a as i32 - 1) * y.y.powi(b as i32);
            }
            if b > 0 {
                g.y += c * b as f64 * y.x.powi(a as i32) * y.y.powi(b as i32 - 1);
            }
        }
        g / self.scale
    }
}

/// `w o phi^{-1}` as a polynomial of the image cell.
fn transported(
    w: &RandomPoly,
    phi_inv: &Tensor,
    image: &Polygon,
    degree: usize,
) -> Result<(CellBasis, DVector<f64>)> {
    let rule = polygon_quadrature(image, 2 * degree + 8);
    let basis = CellBasis::with_rule(image, degree, &rule)?;
    let c = l2_project_with(
        |x, out| basis.eval_into(x, out),
        basis.dim(),
        &rule,
        |x| w.eval(&(phi_inv * x)),
    )?;
    Ok((basis, c))
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Evaluates every transport identity with random polynomial data of degree
/// `k + 1` (`k + 3` for the projector, degree `k` hybrid data for the
/// reconstruction).
pub fn verify_transport_polygon(
    poly: &Polygon,
    phi: &Tensor,
    k_t: &Tensor,
    k: usize,
    rng: &mut impl Rng,
) -> Result<TransportResiduals> {
    let khat = transported_tensor(k_t, phi)?.tensor;
    let phi_inv = phi
        .try_inverse()
        .ok_or_else(|| HhoError::InvalidInput("skew map is not invertible".into()))?;
    let (image, origin) = poly.mapped(phi)?;
    let jac = phi.determinant().abs();
    let (c, h) = (poly.centroid, poly.diameter);
    let mut res = TransportResiduals::default();

    for (i, &j) in origin.iter().enumerate() {
        let jf = (phi * poly.edges[j].tangent).norm();
        let lhs = phi.transpose() * image.edges[i].normal;
        let rhs = poly.edges[j].normal * (jac / jf);
        res.normal = res.normal.max((lhs - rhs).norm() / rhs.norm());
    }

    let deg = k + 1;
    let w = RandomPoly::new(rng, c, h, deg);
    let z = RandomPoly::new(rng, c, h, deg);
    let rule_t = polygon_quadrature(poly, 2 * deg + 8);
    let rule_i = polygon_quadrature(&image, 2 * deg + 8);
    let (bw, cw) = transported(&w, &phi_inv, &image, deg)?;
    let (bz, cz) = transported(&z, &phi_inv, &image, deg)?;

    let wz = rule_t.integrate(|x| w.eval(x) * z.eval(x));
    let scale =
        (rule_t.integrate(|x| w.eval(x).powi(2)) * rule_t.integrate(|x| z.eval(x).powi(2))).sqrt();
    let wz_hat =
        rule_i.integrate(|x| bw.eval_poly(cw.as_slice(), x) * bz.eval_poly(cz.as_slice(), x)) / jac;
    res.cell_inner = rel(wz, wz_hat, scale);

    for (i, &j) in origin.iter().enumerate() {
        let (pe, ie) = (&poly.edges[j], &image.edges[i]);
        let jf = ie.length / pe.length;
        let r = segment_quadrature(&pe.start, &pe.end, 2 * deg + 4);
        let ri = segment_quadrature(&ie.start, &ie.end, 2 * deg + 4);
        let lhs = r.integrate(|x| w.eval(x) * z.eval(x));
        let s = (r.integrate(|x| w.eval(x).powi(2)) * r.integrate(|x| z.eval(x).powi(2))).sqrt();
        let rhs =
            ri.integrate(|x| bw.eval_poly(cw.as_slice(), x) * bz.eval_poly(cz.as_slice(), x)) / jf;
        res.edge_inner = res.edge_inner.max(rel(lhs, rhs, s));
    }

    let a =
        |u: &RandomPoly, v: &RandomPoly| rule_t.integrate(|x| (k_t * u.grad(x)).dot(&v.grad(x)));
    let lhs = a(&w, &z);
    let s = (a(&w, &w) * a(&z, &z)).sqrt();
    let rhs = rule_i.integrate(|x| {
        (khat * bw.grad_poly(cw.as_slice(), x)).dot(&bz.grad_poly(cz.as_slice(), x))
    }) / jac;
    res.grad_inner = rel(lhs, rhs, s);

    let ell = k + 1;
    let v = RandomPoly::new(rng, c, h, k + 3);
    let (bv, cv) = transported(&v, &phi_inv, &image, k + 3)?;
    let vf = fn_field(|x: &Point| v.eval(x), |x: &Point| v.grad(x));
    let vf_hat = fn_field(
        |x: &Point| bv.eval_poly(cv.as_slice(), x),
        |x: &Point| bv.grad_poly(cv.as_slice(), x),
    );
    let (bp, cp) = elliptic_projector(&vf, ell, k_t, poly)?;
    let (bq, cq) = elliptic_projector(&vf_hat, ell, &khat, &image)?;
    let rule = polygon_quadrature(poly, 2 * (k + 3) + 4);
    let diff = rule.integrate(|x| {
        (bp.eval_poly(cp.as_slice(), x) - bq.eval_poly(cq.as_slice(), &(phi * x))).powi(2)
    });
    let norm = rule.integrate(|x| v.eval(x).powi(2));
    res.projector = (diff / norm).sqrt();

    let space = LocalSpace::from_polygon(poly, k)?;
    let space_hat = LocalSpace::from_polygon(&image, k)?;
    let cell_data = RandomPoly::new(rng, c, h, k);
    let edge_data: Vec<RandomPoly> = (0..poly.num_edges())
        .map(|_| RandomPoly::new(rng, c, h, k))
        .collect();
    let mut lv = LocalDofVector::zeros(k, poly.num_edges());
    let mut lv_hat = LocalDofVector::zeros(k, poly.num_edges());
    lv.cell = space.interpolate(poly, |x| cell_data.eval(x))?.cell;
    lv_hat.cell = space_hat
        .interpolate(&image, |x| cell_data.eval(&(phi_inv * x)))?
        .cell;
    for (i, &j) in origin.iter().enumerate() {
        lv.edges[j] = space
            .interpolate(poly, |x| edge_data[j].eval(x))?
            .edges
            .swap_remove(j);
        lv_hat.edges[i] = space_hat
            .interpolate(&image, |x| edge_data[j].eval(&(phi_inv * x)))?
            .edges
            .swap_remove(i);
    }
    let (p, _) = build_reconstruction(&space, k_t)?;
    let (p_hat, _) = build_reconstruction(&space_hat, &khat)?;
    let pv = &p * lv.to_flat();
    let pv_hat = &p_hat * lv_hat.to_flat();
    let rule = polygon_quadrature(poly, 2 * k + 6);
    let diff = rule.integrate(|x| {
        (space.eval_cell(pv.as_slice(), x) - space_hat.eval_cell(pv_hat.as_slice(), &(phi * x)))
            .powi(2)
    });
    let norm = rule.integrate(|x| space.eval_cell(pv.as_slice(), x).powi(2));
    res.reconstruction = (diff / norm.max(f64::MIN_POSITIVE)).sqrt();
    Ok(res)
}

pub fn verify_transport(
    mesh: &Mesh,
    cell: usize,
    phi: &Tensor,
    k_t: &Tensor,
    k: usize,
    rng: &mut impl Rng,
) -> Result<TransportResiduals> {
    let c = mesh
        .cells
        .get(cell)
        .ok_or_else(|| HhoError::InvalidInput(format!("no cell {cell}")))?;
    verify_transport_polygon(&c.geometry, phi, k_t, k, rng)
}
