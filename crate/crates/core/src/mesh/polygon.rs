use crate::{HhoError, Point, Result, Tensor};

/// One side of a [`Polygon`].
///
/// `normal` is the outward unit normal. `tangent` fixes the orientation of the
/// edge polynomial basis; in a mesh it follows the global edge direction, so two
/// cells sharing an edge agree on it.
#[derive(Clone, Debug)]
pub struct PolygonEdge {
    pub start: Point,
    pub end: Point,
    pub midpoint: Point,
    pub length: f64,
    pub tangent: Point,
    pub normal: Point,
}

impl PolygonEdge {
    fn new(start: Point, end: Point) -> Self {
        let d = end - start;
        let length = d.norm();
        let tangent = d / length;
        PolygonEdge {
            start,
            end,
            midpoint: (start + end) * 0.5,
            length,
            tangent,
            normal: Point::new(tangent.y, -tangent.x),
        }
    }

    /// Point at signed arc-length `s` from the midpoint, along `tangent`.
    pub fn point_at(&self, s: f64) -> Point {
        self.midpoint + self.tangent * s
    }
}

/// Geometry of a single polygonal cell, independent of any mesh.
///
/// Vertices are stored counterclockwise and edge `i` joins vertex `i` to
/// vertex `i + 1`. The polygon is required to be star-shaped with respect to
/// its centroid.
#[derive(Clone, Debug)]
pub struct Polygon {
    pub vertices: Vec<Point>,
    pub edges: Vec<PolygonEdge>,
    pub area: f64,
    pub centroid: Point,
    pub diameter: f64,
}

impl Polygon {
    /// Builds the polygon from a vertex loop, reversing it if it is clockwise.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(HhoError::Validation(format!(
                "polygon with {} vertices",
                vertices.len()
            )));
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        Self::from_ccw(vertices)
    }

    /// Builds the polygon from a counterclockwise vertex loop.
    pub fn from_ccw(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(HhoError::Validation(format!("polygon with {n} vertices")));
        }
        let area = signed_area(&vertices);
        let scale = bounding_diameter(&vertices);
        if !(area > 1e-14 * scale * scale) {
            return Err(HhoError::Validation(format!(
                "polygon area {area:e} is not positive"
            )));
        }
        let centroid = centroid(&vertices, area);
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            if (b - a).norm() <= 1e-14 * scale {
                return Err(HhoError::Validation("zero-length polygon side".into()));
            }
            edges.push(PolygonEdge::new(a, b));
        }
        // Star-shapedness with respect to the centroid: every fan triangle is
        // positively oriented and the fan winds around the centroid once.
        let mut winding = 0.0;
        for e in &edges {
            let (u, v) = (e.start - centroid, e.end - centroid);
            let cross = u.x * v.y - u.y * v.x;
            if !(cross > 1e-14 * scale * scale) {
                return Err(HhoError::Validation(
                    "cell is not star-shaped with respect to its centroid".into(),
                ));
            }
            winding += cross.atan2(u.dot(&v));
        }
        if (winding - std::f64::consts::TAU).abs() > 1e-8 {
            return Err(HhoError::Validation(
                "cell boundary is not a simple loop".into(),
            ));
        }
        let mut diameter: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                diameter = diameter.max((vertices[i] - vertices[j]).norm());
            }
        }
        Ok(Polygon {
            vertices,
            edges,
            area,
            centroid,
            diameter,
        })
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Flips the basis orientation of edge `i` (the geometry is unchanged).
    pub(crate) fn flip_edge_tangent(&mut self, i: usize) {
        self.edges[i].tangent = -self.edges[i].tangent;
    }

    /// Characteristic length `|T| / |F|` of edge `i`.
    pub fn d_tf(&self, i: usize) -> f64 {
        self.area / self.edges[i].length
    }

    /// Radius of the largest centroid-centred disc contained in the cell.
    pub fn centroid_inradius(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| (self.centroid - e.start).dot(&(-e.normal)))
            .fold(f64::INFINITY, f64::min)
    }

    /// `h_T / rho_T`.
    pub fn flatness(&self) -> Result<f64> {
        let rho = self.centroid_inradius();
        if !(rho > 0.0) {
            return Err(HhoError::Degenerate("centroid outside cell".into()));
        }
        Ok(self.diameter / rho)
    }

    /// Fan triangles `(centroid, v_i, v_{i+1})`.
    pub fn fan(&self) -> impl Iterator<Item = [Point; 3]> + '_ {
        self.edges
            .iter()
            .map(move |e| [self.centroid, e.start, e.end])
    }

    /// Second-moment matrix `(1/|T|) ∫ (x - x_T)(x - x_T)^t` (exact).
    pub fn covariance(&self) -> Tensor {
        let n = self.vertices.len();
        let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i] - self.centroid;
            let q = self.vertices[(i + 1) % n] - self.centroid;
            let c = p.x * q.y - q.x * p.y;
            sxx += (p.x * p.x + p.x * q.x + q.x * q.x) * c;
            syy += (p.y * p.y + p.y * q.y + q.y * q.y) * c;
            sxy += (p.x * q.y + 2.0 * p.x * p.y + 2.0 * q.x * q.y + q.x * p.y) * c;
        }
        let a = self.area;
        Tensor::new(
            sxx / (12.0 * a),
            sxy / (24.0 * a),
            sxy / (24.0 * a),
            syy / (12.0 * a),
        )
    }

    /// Image of the cell under the linear map `x -> map * x`.
    ///
    /// Returns the image polygon and, for each image edge, the index of the
    /// originating edge. Edge tangents are transported (`map * t`, normalised)
    /// so edge polynomials keep their parametrisation.
    pub fn mapped(&self, map: &Tensor) -> Result<(Polygon, Vec<usize>)> {
        let n = self.vertices.len();
        let det = map.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(HhoError::InvalidInput("singular map".into()));
        }
        let image: Vec<Point> = self.vertices.iter().map(|v| map * v).collect();
        let (verts, origin): (Vec<Point>, Vec<usize>) = if det > 0.0 {
            (image, (0..n).collect())
        } else {
            // Reversed loop: image edge i joins image vertices n-1-i and n-2-i,
            // i.e. it is the image of edge n-2-i (mod n).
            let rev: Vec<Point> = image.into_iter().rev().collect();
            (rev, (0..n).map(|i| (2 * n - 2 - i) % n).collect())
        };
        let mut poly = Polygon::from_ccw(verts)?;
        for (i, &j) in origin.iter().enumerate() {
            let t = map * self.edges[j].tangent;
            if t.dot(&poly.edges[i].tangent) < 0.0 {
                poly.flip_edge_tangent(i);
            }
        }
        Ok((poly, origin))
    }

    /// Whether `x` lies in the closed cell (up to a relative tolerance).
    pub fn contains(&self, x: &Point) -> bool {
        let tol = 1e-12 * self.diameter;
        self.edges
            .iter()
            .all(|e| (x - e.start).dot(&e.normal) <= tol)
            || self.fan().any(|t| in_triangle(&t, x, tol))
    }
}

fn in_triangle(t: &[Point; 3], x: &Point, tol: f64) -> bool {
    (0..3).all(|i| {
        let (a, b) = (t[i], t[(i + 1) % 3]);
        let d = b - a;
        let n = Point::new(d.y, -d.x) / d.norm();
        (x - a).dot(&n) <= tol
    })
}

pub fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    let o = v[0];
    let mut s = 0.0;
    for i in 1..n.saturating_sub(1) {
        let (p, q) = (v[i] - o, v[i + 1] - o);
        s += p.x * q.y - p.y * q.x;
    }
    0.5 * s
}

fn centroid(v: &[Point], area: f64) -> Point {
    let n = v.len();
    let o = v[0];
    let mut c = Point::zeros();
    for i in 1..n - 1 {
        let (p, q) = (v[i] - o, v[i + 1] - o);
        let a = 0.5 * (p.x * q.y - p.y * q.x);
        c += (p + q) * (a / 3.0);
    }
    o + c / area
}

fn bounding_diameter(v: &[Point]) -> f64 {
    let (mut lo, mut hi) = (v[0], v[0]);
    for p in v {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (hi - lo).norm()
}
