//! Polygonal meshes of the plane.
//!
//! Meshes are stored edge-first: a cell side that is split by finer neighbours
//! (hanging nodes) appears as several mesh edges of that cell, so nonconforming
//! meshes need no special treatment downstream.

mod generators;
mod io;
mod polygon;
mod skew;

use std::collections::HashMap;

pub use generators::{generate_cartesian, generate_hexagonal, generate_locally_refined};
pub use io::{
    load_mesh, parse_fvca5, parse_native, save_mesh, write_fvca5, write_native, MeshFormat,
};
pub use polygon::{signed_area, Polygon, PolygonEdge};
pub use skew::{estimate_skew_map, flatness, Flatness, SkewMap};

use crate::{HhoError, Point, Result};

#[derive(Clone, Debug)]
pub struct Edge {
    pub vertices: [usize; 2],
    pub midpoint: Point,
    pub length: f64,
    /// Unit tangent from `vertices[0]` to `vertices[1]`.
    pub tangent: Point,
    /// Incident cells (one for boundary edges, two otherwise).
    pub cells: Vec<usize>,
    /// Outward unit normal with respect to each entry of `cells`.
    pub normals: Vec<Point>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.cells.len() == 1
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    /// Mesh edges in counterclockwise order.
    pub edges: Vec<usize>,
    /// Counterclockwise vertex loop; `vertices[i]` starts `edges[i]`.
    pub vertices: Vec<usize>,
    /// Cell geometry; local edge `i` is mesh edge `edges[i]`, with the edge
    /// basis oriented along the mesh edge tangent.
    pub geometry: Polygon,
}

impl Cell {
    pub fn area(&self) -> f64 {
        self.geometry.area
    }

    pub fn centroid(&self) -> Point {
        self.geometry.centroid
    }

    pub fn diameter(&self) -> f64 {
        self.geometry.diameter
    }

    pub fn local_edge(&self, edge: usize) -> Option<usize> {
        self.edges.iter().position(|&e| e == edge)
    }
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
}

impl Mesh {
    /// Builds a mesh from vertex loops, inferring edges from consecutive
    /// vertices. Loops may be given in either orientation.
    pub fn from_vertex_loops(vertices: Vec<Point>, loops: Vec<Vec<usize>>) -> Result<Self> {
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edge_vertices: Vec<[usize; 2]> = Vec::new();
        let mut cell_edges = Vec::with_capacity(loops.len());
        for (c, lp) in loops.iter().enumerate() {
            if lp.len() < 3 {
                return Err(HhoError::Validation(format!(
                    "cell {c} has fewer than 3 vertices"
                )));
            }
            let mut es = Vec::with_capacity(lp.len());
            for i in 0..lp.len() {
                let (a, b) = (lp[i], lp[(i + 1) % lp.len()]);
                if a >= vertices.len() || b >= vertices.len() {
                    return Err(HhoError::Validation(format!(
                        "cell {c} references a missing vertex"
                    )));
                }
                if a == b {
                    return Err(HhoError::Validation(format!("cell {c} repeats vertex {a}")));
                }
                let key = (a.min(b), a.max(b));
                let id = *edge_ids.entry(key).or_insert_with(|| {
                    edge_vertices.push([key.0, key.1]);
                    edge_vertices.len() - 1
                });
                es.push(id);
            }
            cell_edges.push(es);
        }
        Self::from_edges(vertices, edge_vertices, cell_edges)
    }

    /// Builds a mesh from an explicit edge list and per-cell edge loops.
    pub fn from_edges(
        vertices: Vec<Point>,
        edge_vertices: Vec<[usize; 2]>,
        cell_edges: Vec<Vec<usize>>,
    ) -> Result<Self> {
        for (i, ev) in edge_vertices.iter().enumerate() {
            if ev[0] >= vertices.len() || ev[1] >= vertices.len() || ev[0] == ev[1] {
                return Err(HhoError::Validation(format!(
                    "edge {i} has invalid vertices"
                )));
            }
        }
        let mut edges: Vec<Edge> = edge_vertices
            .iter()
            .map(|&[a, b]| {
                let (pa, pb) = (vertices[a], vertices[b]);
                let d = pb - pa;
                Edge {
                    vertices: [a, b],
                    midpoint: (pa + pb) * 0.5,
                    length: d.norm(),
                    tangent: d / d.norm(),
                    cells: Vec::new(),
                    normals: Vec::new(),
                }
            })
            .collect();

        let mut cells = Vec::with_capacity(cell_edges.len());
        for (c, mut es) in cell_edges.into_iter().enumerate() {
            if es.iter().any(|&e| e >= edges.len()) {
                return Err(HhoError::Validation(format!(
                    "cell {c} references a missing edge"
                )));
            }
            let mut lp = edge_chain(c, &es, &edge_vertices)?;
            let pts: Vec<Point> = lp.iter().map(|&v| vertices[v]).collect();
            if signed_area(&pts) < 0.0 {
                // clockwise listing: reverse both the edge and vertex loops
                es.reverse();
                lp = edge_chain(c, &es, &edge_vertices)?;
            }
            let pts: Vec<Point> = lp.iter().map(|&v| vertices[v]).collect();
            let mut geometry = Polygon::from_ccw(pts)
                .map_err(|e| HhoError::Validation(format!("cell {c}: {e}")))?;
            for (i, &e) in es.iter().enumerate() {
                if edge_vertices[e][0] != lp[i] {
                    geometry.flip_edge_tangent(i);
                }
                edges[e].cells.push(c);
                edges[e].normals.push(geometry.edges[i].normal);
            }
            cells.push(Cell {
                edges: es,
                vertices: lp,
                geometry,
            });
        }
        let mesh = Mesh {
            vertices,
            edges,
            cells,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Checks the structural and geometric invariants of the mesh.
    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            match e.cells.len() {
                1 => {}
                2 if e.cells[0] != e.cells[1] => {
                    if e.normals[0].dot(&e.normals[1]) > -1.0 + 1e-10 {
                        return Err(HhoError::Validation(format!(
                            "edge {i} is traversed in the same direction by both cells"
                        )));
                    }
                }
                n => {
                    return Err(HhoError::Validation(format!(
                        "edge {i} has {n} incident cells"
                    )))
                }
            }
        }
        for (c, cell) in self.cells.iter().enumerate() {
            let g = &cell.geometry;
            let closure: Point = g.edges.iter().map(|e| e.normal * e.length).sum();
            let perimeter: f64 = g.edges.iter().map(|e| e.length).sum();
            if closure.norm() > 1e-12 * perimeter {
                return Err(HhoError::Validation(format!(
                    "cell {c}: boundary does not close"
                )));
            }
            let fan_area: f64 = g
                .fan()
                .map(|[a, b, cc]| {
                    let (u, v) = (b - a, cc - a);
                    0.5 * (u.x * v.y - u.y * v.x)
                })
                .sum();
            if (fan_area - g.area).abs() > 1e-12 * g.area {
                return Err(HhoError::Validation(format!(
                    "cell {c}: fan areas do not sum to |T|"
                )));
            }
        }
        Ok(())
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_interior_edges(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_boundary()).count()
    }

    /// Mesh size `h = max_T h_T`.
    pub fn h(&self) -> f64 {
        self.cells.iter().map(Cell::diameter).fold(0.0, f64::max)
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(Cell::area).sum()
    }

    /// Characteristic length `d_TF = |T| / |F|`.
    pub fn d_tf(&self, cell: usize, edge: usize) -> Result<f64> {
        let c = self
            .cells
            .get(cell)
            .ok_or(HhoError::NotIncident { cell, edge })?;
        let i = c
            .local_edge(edge)
            .ok_or(HhoError::NotIncident { cell, edge })?;
        Ok(c.geometry.d_tf(i))
    }
}

/// Orders the vertices of a cell given its edges in loop order; `lp[i]` is the
/// vertex where edge `es[i]` starts.
fn edge_chain(c: usize, es: &[usize], ev: &[[usize; 2]]) -> Result<Vec<usize>> {
    let open = || HhoError::Validation(format!("cell {c}: edge loop does not close"));
    let n = es.len();
    if n < 3 {
        return Err(HhoError::Validation(format!(
            "cell {c} has fewer than 3 edges"
        )));
    }
    let [a, b] = ev[es[0]];
    let [c0, c1] = ev[es[1]];
    let start = if b == c0 || b == c1 {
        a
    } else if a == c0 || a == c1 {
        b
    } else {
        return Err(open());
    };
    let mut lp = Vec::with_capacity(n);
    let mut cur = start;
    for &e in es {
        let [p, q] = ev[e];
        lp.push(cur);
        cur = if p == cur {
            q
        } else if q == cur {
            p
        } else {
            return Err(open());
        };
    }
    if cur != start {
        return Err(open());
    }
    let mut seen = lp.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != n {
        return Err(HhoError::Validation(format!(
            "cell {c}: loop visits a vertex twice"
        )));
    }
    Ok(lp)
}
