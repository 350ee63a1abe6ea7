use std::collections::HashMap;

use super::Mesh;
use crate::Point;

/// Uniform `n × n` Cartesian mesh of the unit square.
pub fn generate_cartesian(n: usize) -> Mesh {
    assert!(n >= 1, "generate_cartesian needs n >= 1");
    generate_locally_refined_impl(n, 0)
}

/// Hexagonal tiling of the unit square, clipped at the boundary.
///
/// The tiling has `n` hexagons per row and `round(2 n stretch / sqrt 3)` row
/// spacings in the vertical direction, so `stretch = 1` gives (close to)
/// regular hexagons and `stretch > 1` flattens every cell vertically: cells
/// become elongated along `x` and their flatness grows linearly with
/// `stretch`. Rows alternate between cells centred on `x = i/n` (cut in half
/// at the left and right sides) and cells centred on `x = (i + 1/2)/n`. The
/// bottom and top rows are centred on the boundary and cut in half.
pub fn generate_hexagonal(n: usize, stretch: f64) -> Mesh {
    assert!(n >= 1, "generate_hexagonal needs n >= 1");
    assert!(stretch >= 1.0, "generate_hexagonal needs stretch >= 1");
    let rows = ((2.0 * n as f64 * stretch / 3f64.sqrt()).round() as usize).max(1);
    let w = 1.0 / n as f64;
    let r = 2.0 / (3.0 * rows as f64);

    // Vertex positions live on a lattice: x in multiples of w/2, y in
    // multiples of r/2. Integer keys keep shared vertices exact.
    let mut builder = LatticeBuilder::new(w * 0.5, r * 0.5);
    for j in 0..=rows {
        let cy = 3 * j as i64; // in units of r/2
        let shifted = j % 2 == 1;
        let centres: Vec<i64> = if shifted {
            (0..n as i64).map(|i| 2 * i + 1).collect()
        } else {
            (0..=n as i64).map(|i| 2 * i).collect()
        };
        for cx in centres {
            // pointy-top hexagon, counterclockwise from the bottom vertex
            let hex = [
                (cx, cy - 2),
                (cx + 1, cy - 1),
                (cx + 1, cy + 1),
                (cx, cy + 2),
                (cx - 1, cy + 1),
                (cx - 1, cy - 1),
            ];
            let clipped = clip_to_box(&hex, 2 * n as i64, 3 * rows as i64);
            if clipped.len() >= 3 {
                builder.add_cell(&clipped);
            }
        }
    }
    builder.finish()
}

/// Cartesian `base_n × base_n` mesh whose lower-left quadrant is quartered,
/// then the lower-left quadrant of the refined block is quartered again, and so
/// on `levels` times (2:1 balanced, hanging nodes on the refinement fronts).
pub fn generate_locally_refined(base_n: usize, levels: usize) -> Mesh {
    assert!(base_n >= 2, "generate_locally_refined needs base_n >= 2");
    generate_locally_refined_impl(base_n, levels)
}

fn generate_locally_refined_impl(n: usize, levels: usize) -> Mesh {
    // Integer coordinates on the finest lattice of spacing 1/(n 2^levels).
    let fine = 1i64 << levels;
    let block = n.div_ceil(2) as i64;
    // Each square is (x0, y0, size); recursive quartering of the lower-left
    // region of extent block * fine / 2^(r-1).
    let mut squares: Vec<(i64, i64, i64)> = Vec::new();
    for j in 0..n as i64 {
        for i in 0..n as i64 {
            squares.push((i * fine, j * fine, fine));
        }
    }
    for r in 1..=levels {
        let extent = (block * fine) >> (r - 1);
        let mut next = Vec::with_capacity(squares.len() + 3 * squares.len() / 4);
        for (x, y, s) in squares {
            if x + s <= extent && y + s <= extent && s > 1 {
                let h = s / 2;
                next.extend([(x, y, h), (x + h, y, h), (x, y + h, h), (x + h, y + h, h)]);
            } else {
                next.push((x, y, s));
            }
        }
        squares = next;
    }
    let unit = 1.0 / (n as f64 * fine as f64);
    let mut builder = LatticeBuilder::new(unit, unit);
    // register corners first so hanging nodes are known when loops are built
    for &(x, y, s) in &squares {
        for c in [(x, y), (x + s, y), (x + s, y + s), (x, y + s)] {
            builder.vertex(c);
        }
    }
    for &(x, y, s) in &squares {
        let mut lp = Vec::new();
        let sides = [
            ((x, y), (1, 0)),
            ((x + s, y), (0, 1)),
            ((x + s, y + s), (-1, 0)),
            ((x, y + s), (0, -1)),
        ];
        for ((sx, sy), (dx, dy)) in sides {
            lp.push((sx, sy));
            for t in 1..s {
                let p = (sx + dx * t, sy + dy * t);
                if builder.has(p) {
                    lp.push(p);
                }
            }
        }
        builder.add_cell(&lp);
    }
    builder.finish()
}

/// Sutherland–Hodgman clipping of an integer polygon against
/// `[0, xmax] × [0, ymax]`. The clip lines pass through lattice points of the
/// hexagons used here, so intersections stay on the lattice.
fn clip_to_box(poly: &[(i64, i64)], xmax: i64, ymax: i64) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = poly.to_vec();
    // (axis, bound, keep_greater)
    for (axis, bound, keep_ge) in [
        (0, 0, true),
        (0, xmax, false),
        (1, 0, true),
        (1, ymax, false),
    ] {
        let coord = |p: &(i64, i64)| if axis == 0 { p.0 } else { p.1 };
        let inside = |p: &(i64, i64)| {
            if keep_ge {
                coord(p) >= bound
            } else {
                coord(p) <= bound
            }
        };
        let mut out = Vec::new();
        for i in 0..pts.len() {
            let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
            let (ia, ib) = (inside(&a), inside(&b));
            if ia {
                out.push(a);
            }
            if ia != ib {
                let (ca, cb) = (coord(&a), coord(&b));
                let (oa, ob) = if axis == 0 { (a.1, b.1) } else { (a.0, b.0) };
                let num = (bound - ca) * (ob - oa);
                let den = cb - ca;
                debug_assert_eq!(num % den, 0, "clip point off lattice");
                let other = oa + num / den;
                out.push(if axis == 0 {
                    (bound, other)
                } else {
                    (other, bound)
                });
            }
        }
        out.dedup();
        if out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        pts = out;
        if pts.is_empty() {
            break;
        }
    }
    remove_collinear(pts)
}

fn remove_collinear(pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    let n = pts.len();
    if n < 3 {
        return pts;
    }
    (0..n)
        .filter(|&i| {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0) != 0
        })
        .map(|i| pts[i])
        .collect()
}

/// Collects cells given on an integer lattice and deduplicates vertices.
struct LatticeBuilder {
    dx: f64,
    dy: f64,
    ids: HashMap<(i64, i64), usize>,
    vertices: Vec<Point>,
    loops: Vec<Vec<usize>>,
}

impl LatticeBuilder {
    fn new(dx: f64, dy: f64) -> Self {
        LatticeBuilder {
            dx,
            dy,
            ids: HashMap::new(),
            vertices: Vec::new(),
            loops: Vec::new(),
        }
    }

    fn vertex(&mut self, p: (i64, i64)) -> usize {
        let (dx, dy) = (self.dx, self.dy);
        let vertices = &mut self.vertices;
        *self.ids.entry(p).or_insert_with(|| {
            vertices.push(Point::new(p.0 as f64 * dx, p.1 as f64 * dy));
            vertices.len() - 1
        })
    }

    fn has(&self, p: (i64, i64)) -> bool {
        self.ids.contains_key(&p)
    }

    fn add_cell(&mut self, lp: &[(i64, i64)]) {
        let ids = lp.iter().map(|&p| self.vertex(p)).collect();
        self.loops.push(ids);
    }

    fn finish(self) -> Mesh {
        Mesh::from_vertex_loops(self.vertices, self.loops).expect("generated mesh is valid")
    }
}
