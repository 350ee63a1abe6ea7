use crate::mesh::Mesh;

/// Global numbering of the edge unknowns.
///
/// Only interior edges carry global unknowns; boundary edges hold Dirichlet
/// data and are eliminated.
#[derive(Clone, Debug)]
pub struct DofMap {
    pub k: usize,
    /// Unknowns per edge, `k + 1`.
    pub per_edge: usize,
    /// Global offset of each edge block, `None` on the boundary.
    pub edge_offset: Vec<Option<usize>>,
    /// Interior edges in global order.
    pub interior_edges: Vec<usize>,
    pub total: usize,
}

impl DofMap {
    pub fn new(mesh: &Mesh, k: usize) -> Self {
        let per_edge = k + 1;
        let mut edge_offset = vec![None; mesh.num_edges()];
        let mut interior_edges = Vec::new();
        for (e, edge) in mesh.edges.iter().enumerate() {
            if !edge.is_boundary() {
                edge_offset[e] = Some(interior_edges.len() * per_edge);
                interior_edges.push(e);
            }
        }
        DofMap {
            k,
            per_edge,
            total: interior_edges.len() * per_edge,
            edge_offset,
            interior_edges,
        }
    }

    pub fn is_boundary(&self, edge: usize) -> bool {
        self.edge_offset[edge].is_none()
    }

    /// Interior index of an edge (its offset divided by `k + 1`).
    pub fn slot(&self, edge: usize) -> Option<usize> {
        self.edge_offset[edge].map(|o| o / self.per_edge)
    }

    /// Global indices of the local edge unknowns of `cell`, in local order;
    /// `None` marks boundary unknowns.
    pub fn cell_indices(&self, mesh: &Mesh, cell: usize) -> Vec<Option<usize>> {
        mesh.cells[cell]
            .edges
            .iter()
            .flat_map(|&e| (0..self.per_edge).map(move |a| self.edge_offset[e].map(|o| o + a)))
            .collect()
    }
}
