//! Structured triangulations of axis-aligned rectangles.
//!
//! The solver works on conforming meshes built from a uniform grid of
//! `cells_per_side x cells_per_side` cells, each split into two triangles
//! along the same diagonal (lower-left to upper-right). The mesh is
//! immutable after construction and safe to share across threads.

use crate::error::{Error, Result};

/// Axis-aligned rectangular domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectDomain {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl RectDomain {
    /// Creates a rectangle, rejecting empty or inverted extents.
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min < x_max) || !(y_min < y_max) {
            return Err(Error::InvalidMesh(format!(
                "degenerate domain [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// The square `[lo, hi]^2`.
    pub fn square(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, lo, hi)
    }

    pub fn unit_square() -> Self {
        Self {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
        }
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

/// Which side of the rectangle a boundary edge lies on; fixes the outward
/// normal of the edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundarySide {
    Bottom,
    Right,
    Top,
    Left,
}

impl BoundarySide {
    pub fn outward_normal(self) -> [f64; 2] {
        match self {
            BoundarySide::Bottom => [0.0, -1.0],
            BoundarySide::Right => [1.0, 0.0],
            BoundarySide::Top => [0.0, 1.0],
            BoundarySide::Left => [-1.0, 0.0],
        }
    }
}

/// Boundary edge as a vertex-index pair plus its outward-normal tag.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub side: BoundarySide,
}

/// Conforming structured triangulation of a rectangle.
///
/// Triangles are consistently counter-clockwise. For a grid cell with
/// corners `a` (lower-left), `b` (lower-right), `c` (upper-right),
/// `d` (upper-left), the two triangles are `(a, b, c)` and `(a, c, d)`.
#[derive(Clone, Debug)]
pub struct TriMesh {
    pub domain: RectDomain,
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub cells_per_side: usize,
    /// Edge length of the grid cells along x. Coincides with the y edge for
    /// square domains, which is the only case the convergence tables use.
    pub cell_size: f64,
    /// Edge length of the grid cells along y.
    pub cell_size_y: f64,
    /// Maximum triangle diameter (the cell diagonal).
    pub h: f64,
}

/// Builds the uniform triangulation of `domain` with
/// `cells_per_side x cells_per_side` cells, each split along the same
/// diagonal. Produces `2 * cells_per_side^2` triangles and
/// `(cells_per_side + 1)^2` vertices.
pub fn build_structured_mesh(domain: RectDomain, cells_per_side: usize) -> Result<TriMesh> {
    if cells_per_side == 0 {
        return Err(Error::InvalidMesh(
            "cells_per_side must be at least 1".into(),
        ));
    }
    // Re-validate: the domain may have been constructed by hand.
    let domain = RectDomain::new(domain.x_min, domain.x_max, domain.y_min, domain.y_max)?;

    let c = cells_per_side;
    let dx = domain.width() / c as f64;
    let dy = domain.height() / c as f64;

    let vid = |i: usize, j: usize| j * (c + 1) + i;

    let mut vertices = Vec::with_capacity((c + 1) * (c + 1));
    for j in 0..=c {
        for i in 0..=c {
            // Endpoints are exact so boundary vertices sit on the boundary.
            let x = if i == c {
                domain.x_max
            } else {
                domain.x_min + i as f64 * dx
            };
            let y = if j == c {
                domain.y_max
            } else {
                domain.y_min + j as f64 * dy
            };
            vertices.push([x, y]);
        }
    }

    let mut triangles = Vec::with_capacity(2 * c * c);
    for j in 0..c {
        for i in 0..c {
            let a = vid(i, j);
            let b = vid(i + 1, j);
            let cc = vid(i + 1, j + 1);
            let d = vid(i, j + 1);
            triangles.push([a, b, cc]);
            triangles.push([a, cc, d]);
        }
    }

    let mut boundary_edges = Vec::with_capacity(4 * c);
    for i in 0..c {
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(i, 0), vid(i + 1, 0)],
            side: BoundarySide::Bottom,
        });
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(c, i), vid(c, i + 1)],
            side: BoundarySide::Right,
        });
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(i, c), vid(i + 1, c)],
            side: BoundarySide::Top,
        });
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(0, i), vid(0, i + 1)],
            side: BoundarySide::Left,
        });
    }

    Ok(TriMesh {
        domain,
        vertices,
        triangles,
        boundary_edges,
        cells_per_side: c,
        cell_size: dx,
        cell_size_y: dy,
        h: dx.hypot(dy),
    })
}

impl TriMesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Vertex coordinates of triangle `k`.
    pub fn triangle_coords(&self, k: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[k];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Signed area of triangle `k`; positive for the consistent CCW
    /// orientation used here.
    pub fn triangle_area(&self, k: usize) -> f64 {
        let [p0, p1, p2] = self.triangle_coords(k);
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_triangles()).map(|k| self.triangle_area(k)).sum()
    }

    /// Finds the triangle containing `(x, y)` and the reference coordinates
    /// of the point inside it. Points outside the domain are clamped onto it.
    pub fn locate_point(&self, x: f64, y: f64) -> (usize, [f64; 2]) {
        let c = self.cells_per_side;
        let fx = ((x - self.domain.x_min) / self.cell_size).clamp(0.0, c as f64 - 1e-12);
        let fy = ((y - self.domain.y_min) / self.cell_size_y).clamp(0.0, c as f64 - 1e-12);
        let ci = (fx.floor() as usize).min(c - 1);
        let cj = (fy.floor() as usize).min(c - 1);
        let lx = (fx - ci as f64).clamp(0.0, 1.0);
        let ly = (fy - cj as f64).clamp(0.0, 1.0);
        let cell = 2 * (cj * c + ci);
        if ly <= lx {
            // lower triangle (a, b, c): xi + eta = lx, eta = ly
            (cell, [lx - ly, ly])
        } else {
            // upper triangle (a, c, d): xi = lx, xi + eta = ly
            (cell + 1, [lx, ly - lx])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn smallest_structured_mesh() {
        let mesh = build_structured_mesh(RectDomain::unit_square(), 1).unwrap();
        assert_eq!(mesh.n_triangles(), 2);
        assert_eq!(mesh.n_vertices(), 4);
        assert_eq!(mesh.boundary_edges.len(), 4);
    }

    #[test]
    fn area_partition_unit_square() {
        let mesh = build_structured_mesh(RectDomain::unit_square(), 8).unwrap();
        assert_eq!(mesh.n_triangles(), 128);
        assert!((mesh.total_area() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn diameter_of_diagonal_split() {
        let domain = RectDomain::square(0.0, 2.5).unwrap();
        let mesh = build_structured_mesh(domain, 4).unwrap();
        // cell edge 0.625, diagonal 0.625 * sqrt(2)
        assert_eq!(mesh.cell_size, 0.625);
        assert!((mesh.h - 0.625 * 2.0_f64.sqrt()).abs() <= 1e-15);
        assert!((mesh.h - 0.883_883_476_483_184_4).abs() <= 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(build_structured_mesh(RectDomain::unit_square(), 0).is_err());
        assert!(RectDomain::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(RectDomain::new(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn triangles_are_ccw_and_well_formed() {
        let mesh = build_structured_mesh(RectDomain::square(-1.0, 1.0).unwrap(), 5).unwrap();
        for k in 0..mesh.n_triangles() {
            assert!(mesh.triangle_area(k) > 0.0);
            let [a, b, c] = mesh.triangles[k];
            assert!(a < mesh.n_vertices() && b < mesh.n_vertices() && c < mesh.n_vertices());
            assert!(a != b && b != c && a != c);
        }
    }

    #[test]
    fn edge_manifold_property() {
        let mesh = build_structured_mesh(RectDomain::unit_square(), 6).unwrap();
        let mut mult: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &mesh.triangles {
            for e in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
                let key = (e.0.min(e.1), e.0.max(e.1));
                *mult.entry(key).or_insert(0) += 1;
            }
        }
        let boundary: std::collections::HashSet<(usize, usize)> = mesh
            .boundary_edges
            .iter()
            .map(|e| {
                (
                    e.vertices[0].min(e.vertices[1]),
                    e.vertices[0].max(e.vertices[1]),
                )
            })
            .collect();
        for (edge, m) in &mult {
            if boundary.contains(edge) {
                assert_eq!(*m, 1, "boundary edge {edge:?} shared by {m} triangles");
            } else {
                assert_eq!(*m, 2, "interior edge {edge:?} shared by {m} triangles");
            }
        }
        // every tagged boundary edge appears in the mesh
        for e in &boundary {
            assert!(mult.contains_key(e));
        }
    }

    #[test]
    fn refinement_halves_cell_size_and_h() {
        let domain = RectDomain::unit_square();
        let coarse = build_structured_mesh(domain, 4).unwrap();
        let fine = build_structured_mesh(domain, 8).unwrap();
        assert_eq!(coarse.cell_size, 2.0 * fine.cell_size);
        assert_eq!(coarse.h, 2.0 * fine.h);
    }

    #[test]
    fn locate_point_reproduces_coordinates() {
        let domain = RectDomain::square(-1.0, 1.0).unwrap();
        let mesh = build_structured_mesh(domain, 7).unwrap();
        let probe = [
            (-1.0, -1.0),
            (1.0, 1.0),
            (0.3, -0.7),
            (-0.25, 0.99),
            (0.0, 0.0),
        ];
        for &(x, y) in &probe {
            let (k, [xi, eta]) = mesh.locate_point(x, y);
            let [p0, p1, p2] = mesh.triangle_coords(k);
            let rx = p0[0] + xi * (p1[0] - p0[0]) + eta * (p2[0] - p0[0]);
            let ry = p0[1] + xi * (p1[1] - p0[1]) + eta * (p2[1] - p0[1]);
            assert!((rx - x).abs() <= 1e-12 && (ry - y).abs() <= 1e-12);
            assert!(xi >= -1e-12 && eta >= -1e-12 && xi + eta <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn outward_normals_point_outward() {
        let mesh = build_structured_mesh(RectDomain::unit_square(), 3).unwrap();
        for e in &mesh.boundary_edges {
            let n = e.side.outward_normal();
            let [p, q] = [mesh.vertices[e.vertices[0]], mesh.vertices[e.vertices[1]]];
            let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
            let outside = [mid[0] + 1e-6 * n[0], mid[1] + 1e-6 * n[1]];
            assert!(!mesh.domain.contains(outside[0], outside[1]));
        }
    }
}
