use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::quadrature::{polygon_quadrature, segment_quadrature, QuadRule};
use crate::mesh::Polygon;
use crate::{HhoError, Point, Result, Tensor};

/// `dim P^l` in two variables.
pub fn dim_cell(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// Exponents `(a, b)` of the monomials `xi_1^a xi_2^b`, ordered by total degree.
pub fn exponents(degree: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(dim_cell(degree));
    for d in 0..=degree {
        for j in 0..=d {
            out.push((d - j, j));
        }
    }
    out
}

/// Orthonormal basis of `P^l(T)`.
///
/// Monomials are taken in the inertial frame `xi = frame (x - center)`, where
/// `frame = D R^t` aligns with the principal axes of the cell and scales each
/// axis to unit half-width; a two-pass Gram–Cholesky step then makes the basis
/// `L²(T)`-orthonormal. The coefficient matrix is lower triangular, so the
/// first `dim P^m` functions span `P^m(T)` for every `m <= l`.
#[derive(Clone, Debug)]
pub struct CellBasis {
    pub degree: usize,
    pub center: Point,
    pub frame: Tensor,
    pub exponents: Vec<(usize, usize)>,
    /// Row `i` holds the monomial coefficients of `phi_i`.
    pub coeffs: DMatrix<f64>,
}

impl CellBasis {
    pub fn new(poly: &Polygon, degree: usize) -> Result<Self> {
        let rule = polygon_quadrature(poly, 2 * degree);
        Self::with_rule(poly, degree, &rule)
    }

    /// Builds the basis using `rule` (exact to degree `2 * degree`) for the
    /// Gram matrices.
    pub fn with_rule(poly: &Polygon, degree: usize, rule: &QuadRule) -> Result<Self> {
        let frame = inertial_frame(poly)?;
        let n = dim_cell(degree);
        let mut basis = CellBasis {
            degree,
            center: poly.centroid,
            frame,
            exponents: exponents(degree),
            coeffs: DMatrix::identity(n, n),
        };
        for _ in 0..2 {
            let gram = basis.gram(rule);
            let l = gram
                .cholesky()
                .ok_or_else(|| {
                    HhoError::SingularLocal("cell Gram matrix is not positive definite".into())
                })?
                .unpack();
            let linv = l
                .solve_lower_triangular(&DMatrix::identity(n, n))
                .ok_or_else(|| HhoError::SingularLocal("singular cell Gram factor".into()))?;
            basis.coeffs = linv * &basis.coeffs;
        }
        Ok(basis)
    }

    /// Plain monomials `((x - center) in frame)^alpha`, not orthonormalised.
    pub fn monomials(center: Point, frame: Tensor, degree: usize) -> Self {
        let n = dim_cell(degree);
        CellBasis {
            degree,
            center,
            frame,
            exponents: exponents(degree),
            coeffs: DMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn gram(&self, rule: &QuadRule) -> DMatrix<f64> {
        let n = self.dim();
        let mut g = DMatrix::zeros(n, n);
        let mut v = vec![0.0; n];
        for (x, w) in rule.points.iter().zip(&rule.weights) {
            self.eval_into(x, &mut v);
            for j in 0..n {
                let wj = w * v[j];
                for i in j..n {
                    g[(i, j)] += wj * v[i];
                }
            }
        }
        g.fill_upper_triangle_with_lower_triangle();
        g
    }

    fn local(&self, x: &Point) -> Point {
        self.frame * (x - self.center)
    }

    fn monomial_values(&self, x: &Point, m: &mut [f64]) {
        let xi = self.local(x);
        let (px, py) = powers(xi, self.degree);
        for (v, &(a, b)) in m.iter_mut().zip(&self.exponents) {
            *v = px[a] * py[b];
        }
    }

    /// Values of all basis functions at `x`.
    pub fn eval_into(&self, x: &Point, out: &mut [f64]) {
        let n = self.dim();
        let mut m = [0.0; 64];
        self.monomial_values(x, &mut m[..n]);
        for i in 0..n {
            out[i] = (0..=i).map(|j| self.coeffs[(i, j)] * m[j]).sum();
        }
    }

    pub fn eval(&self, x: &Point) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        self.eval_into(x, v.as_mut_slice());
        v
    }

    /// Physical gradients of all basis functions at `x`.
    pub fn grad_into(&self, x: &Point, out: &mut [Point]) {
        let n = self.dim();
        let xi = self.local(x);
        let (px, py) = powers(xi, self.degree);
        let mut gm = [Point::zeros(); 64];
        for (g, &(a, b)) in gm.iter_mut().zip(&self.exponents) {
            let dx = if a > 0 {
                a as f64 * px[a - 1] * py[b]
            } else {
                0.0
            };
            let dy = if b > 0 {
                b as f64 * px[a] * py[b - 1]
            } else {
                0.0
            };
            *g = self.frame.transpose() * Point::new(dx, dy);
        }
        for i in 0..n {
            out[i] = (0..=i).fold(Point::zeros(), |acc, j| acc + gm[j] * self.coeffs[(i, j)]);
        }
    }

    pub fn grad(&self, x: &Point) -> Vec<Point> {
        let mut g = vec![Point::zeros(); self.dim()];
        self.grad_into(x, &mut g);
        g
    }

    /// Evaluates `sum_i c_i phi_i(x)` using the first `c.len()` functions.
    pub fn eval_poly(&self, c: &[f64], x: &Point) -> f64 {
        let v = self.eval(x);
        c.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn grad_poly(&self, c: &[f64], x: &Point) -> Point {
        let g = self.grad(x);
        c.iter()
            .zip(&g)
            .fold(Point::zeros(), |acc, (a, b)| acc + b * *a)
    }
}

fn powers(xi: Point, degree: usize) -> ([f64; 16], [f64; 16]) {
    let mut px = [1.0; 16];
    let mut py = [1.0; 16];
    for d in 1..=degree {
        px[d] = px[d - 1] * xi.x;
        py[d] = py[d - 1] * xi.y;
    }
    (px, py)
}

/// `D R^t` with `R diag(l1, l2) R^t` the covariance and `D = diag(1/sqrt(3 l_i))`.
pub fn inertial_frame(poly: &Polygon) -> Result<Tensor> {
    let cov = poly.covariance();
    let (l, r) = if cov[(0, 1)] == 0.0 {
        ((cov[(0, 0)], cov[(1, 1)]), Tensor::identity())
    } else {
        let e = SymmetricEigen::new(cov);
        ((e.eigenvalues[0], e.eigenvalues[1]), e.eigenvectors)
    };
    if !(l.0 > 0.0 && l.1 > 0.0) || l.0.min(l.1) <= 1e-14 * l.0.max(l.1) {
        return Err(HhoError::Degenerate(
            "cell second moments are degenerate".into(),
        ));
    }
    let d = Tensor::new(1.0 / (3.0 * l.0).sqrt(), 0.0, 0.0, 1.0 / (3.0 * l.1).sqrt());
    Ok(d * r.transpose())
}

/// Orthonormal basis of `P^k(F)` in the scaled abscissa
/// `s = (x - midpoint) . tangent / (|F|/2)`.
#[derive(Clone, Debug)]
pub struct EdgeBasis {
    pub degree: usize,
    pub midpoint: Point,
    pub tangent: Point,
    pub half_length: f64,
    pub coeffs: DMatrix<f64>,
}

impl EdgeBasis {
    pub fn new(a: &Point, b: &Point, tangent: &Point, degree: usize) -> Result<Self> {
        let n = degree + 1;
        let mut basis = EdgeBasis {
            degree,
            midpoint: (a + b) * 0.5,
            tangent: *tangent,
            half_length: 0.5 * (b - a).norm(),
            coeffs: DMatrix::identity(n, n),
        };
        if basis.half_length <= 0.0 {
            return Err(HhoError::Degenerate("zero-length edge".into()));
        }
        let rule = segment_quadrature(a, b, 2 * degree);
        for _ in 0..2 {
            let gram = basis.gram(&rule);
            let l = gram
                .cholesky()
                .ok_or_else(|| {
                    HhoError::SingularLocal("edge Gram matrix is not positive definite".into())
                })?
                .unpack();
            let linv = l
                .solve_lower_triangular(&DMatrix::identity(n, n))
                .ok_or_else(|| HhoError::SingularLocal("singular edge Gram factor".into()))?;
            basis.coeffs = linv * &basis.coeffs;
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    pub fn abscissa(&self, x: &Point) -> f64 {
        (x - self.midpoint).dot(&self.tangent) / self.half_length
    }

    pub fn gram(&self, rule: &QuadRule) -> DMatrix<f64> {
        let n = self.dim();
        let mut g = DMatrix::zeros(n, n);
        let mut v = vec![0.0; n];
        for (x, w) in rule.points.iter().zip(&rule.weights) {
            self.eval_into(x, &mut v);
            for i in 0..n {
                for j in 0..n {
                    g[(i, j)] += w * v[i] * v[j];
                }
            }
        }
        g
    }

    pub fn eval_into(&self, x: &Point, out: &mut [f64]) {
        let s = self.abscissa(x);
        let mut m = [1.0; 16];
        for d in 1..=self.degree {
            m[d] = m[d - 1] * s;
        }
        for i in 0..self.dim() {
            out[i] = (0..=i).map(|j| self.coeffs[(i, j)] * m[j]).sum();
        }
    }

    pub fn eval(&self, x: &Point) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        self.eval_into(x, v.as_mut_slice());
        v
    }

    pub fn eval_poly(&self, c: &[f64], x: &Point) -> f64 {
        let v = self.eval(x);
        c.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
    }
}
