//! Local-to-global degree-of-freedom numbering for continuous elements.
//!
//! Vertex nodes are shared through the mesh connectivity, edge nodes through
//! a canonical edge orientation (low vertex index to high), so neighboring
//! triangles agree on shared degrees of freedom without any coordinate
//! comparisons.

use std::collections::HashMap;

use crate::element::ReferenceElement;
use crate::error::{Error, Result};
use crate::mesh::TriMesh;

/// Per-triangle local-to-global index table for a C0 Lagrange space.
#[derive(Clone, Debug)]
pub struct DofMap {
    pub n_dofs: usize,
    cell_dofs: Vec<Vec<usize>>,
}

impl DofMap {
    pub fn build(mesh: &TriMesh, elem: &ReferenceElement) -> Result<Self> {
        let p = elem.degree;
        let n_vertices = mesh.n_vertices();

        // undirected edge -> edge id, numbered in lexicographic key order so
        // the global numbering does not depend on triangle traversal order
        let keys: std::collections::BTreeSet<(usize, usize)> = mesh
            .triangles
            .iter()
            .flat_map(|tri| [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let edges: HashMap<(usize, usize), usize> =
            keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        let n_edges = edges.len();
        let per_edge = p - 1;
        let per_cell = if p >= 3 { (p - 1) * (p - 2) / 2 } else { 0 };
        let interior_base = n_vertices + per_edge * n_edges;
        let n_dofs = interior_base + per_cell * mesh.n_triangles();

        // global index of the s-th node (s = 1..p-1) on the walk a -> b
        let edge_dof = |a: usize, b: usize, s: usize| -> usize {
            let key = (a.min(b), a.max(b));
            let id = edges[&key];
            let slot = if a < b { s - 1 } else { p - 1 - s };
            n_vertices + id * per_edge + slot
        };

        let mut cell_dofs = Vec::with_capacity(mesh.n_triangles());
        for (k, tri) in mesh.triangles.iter().enumerate() {
            let mut dofs = Vec::with_capacity(elem.n_nodes());
            let mut interior_seen = 0usize;
            for &[a, b, c] in elem.lattice() {
                let g = match (a, b, c) {
                    (a, 0, 0) if a == p => tri[0],
                    (0, b, 0) if b == p => tri[1],
                    (0, 0, c) if c == p => tri[2],
                    (_, b, 0) if b > 0 => edge_dof(tri[0], tri[1], b),
                    (0, _, c) if c > 0 => edge_dof(tri[1], tri[2], c),
                    (a, 0, _) if a > 0 => edge_dof(tri[2], tri[0], a),
                    _ => {
                        let g = interior_base + k * per_cell + interior_seen;
                        interior_seen += 1;
                        g
                    }
                };
                dofs.push(g);
            }
            if interior_seen != per_cell {
                return Err(Error::DimensionMismatch(format!(
                    "triangle {k}: expected {per_cell} interior nodes, found {interior_seen}"
                )));
            }
            cell_dofs.push(dofs);
        }

        Ok(Self { n_dofs, cell_dofs })
    }

    /// Global dof indices of the local nodes of triangle `k`, in the
    /// element's node order.
    pub fn cell(&self, k: usize) -> &[usize] {
        &self.cell_dofs[k]
    }

    pub fn n_cells(&self) -> usize {
        self.cell_dofs.len()
    }

    /// Physical coordinates of every global dof (the Lagrange node
    /// positions). Shared nodes are written once per adjacent triangle with
    /// identical values.
    pub fn node_positions(&self, mesh: &TriMesh, elem: &ReferenceElement) -> Vec<[f64; 2]> {
        let mut pos = vec![[f64::NAN; 2]; self.n_dofs];
        for k in 0..self.n_cells() {
            let [p0, p1, p2] = mesh.triangle_coords(k);
            for (loc, &g) in self.cell(k).iter().enumerate() {
                let [xi, eta] = elem.node_coords[loc];
                pos[g] = [
                    p0[0] + xi * (p1[0] - p0[0]) + eta * (p2[0] - p0[0]),
                    p0[1] + xi * (p1[1] - p0[1]) + eta * (p2[1] - p0[1]),
                ];
            }
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_structured_mesh, RectDomain};

    fn setup(cells: usize, degree: usize) -> (TriMesh, ReferenceElement, DofMap) {
        let mesh = build_structured_mesh(RectDomain::unit_square(), cells).unwrap();
        let elem = ReferenceElement::lagrange(degree).unwrap();
        let dofs = DofMap::build(&mesh, &elem).unwrap();
        (mesh, elem, dofs)
    }

    #[test]
    fn dof_count_on_structured_mesh() {
        for cells in [1, 2, 3] {
            for degree in [1, 2, 3, 4] {
                let (_, _, dofs) = setup(cells, degree);
                assert_eq!(
                    dofs.n_dofs,
                    (degree * cells + 1) * (degree * cells + 1),
                    "cells = {cells}, degree = {degree}"
                );
            }
        }
    }

    #[test]
    fn every_dof_is_referenced() {
        let (_, _, dofs) = setup(3, 3);
        let mut seen = vec![false; dofs.n_dofs];
        for k in 0..dofs.n_cells() {
            for &g in dofs.cell(k) {
                seen[g] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn shared_nodes_coincide_geometrically() {
        // C0 continuity: distinct dofs have distinct positions, and the
        // positions written from different triangles agree (no NaN survives,
        // every slot is written at least once and overwritten consistently).
        for degree in [2, 3, 4] {
            let (mesh, elem, dofs) = setup(2, degree);
            let pos = dofs.node_positions(&mesh, &elem);
            let quantized: std::collections::HashSet<(i64, i64)> = pos
                .iter()
                .map(|p| ((p[0] * 1e9).round() as i64, (p[1] * 1e9).round() as i64))
                .collect();
            assert_eq!(quantized.len(), dofs.n_dofs, "degree {degree}");
        }
    }

    #[test]
    fn edge_nodes_agree_between_neighbors() {
        // For each pair of triangles sharing an edge, the dofs they assign to
        // that edge's interior nodes must match as sets and as positions.
        let (mesh, elem, dofs) = setup(2, 4);
        let pos = dofs.node_positions(&mesh, &elem);
        // recompute positions per triangle and compare against the shared table
        for k in 0..dofs.n_cells() {
            let [p0, p1, p2] = mesh.triangle_coords(k);
            for (loc, &g) in dofs.cell(k).iter().enumerate() {
                let [xi, eta] = elem.node_coords[loc];
                let x = p0[0] + xi * (p1[0] - p0[0]) + eta * (p2[0] - p0[0]);
                let y = p0[1] + xi * (p1[1] - p0[1]) + eta * (p2[1] - p0[1]);
                assert!(
                    (pos[g][0] - x).abs() <= 1e-12 && (pos[g][1] - y).abs() <= 1e-12,
                    "dof {g} of triangle {k} disagrees about its position"
                );
            }
        }
    }
}
