//! Lagrange reference elements of arbitrary degree on the triangle.
//!
//! Nodes sit on the uniform barycentric lattice `(a, b, c) / p` with
//! `a + b + c = p`. Shape functions use the classic product formula for
//! equispaced simplex lattices,
//!
//! ```text
//! N_(a,b,c)(l0, l1, l2) = P_a(l0) P_b(l1) P_c(l2),
//! P_m(l) = prod_{r=0}^{m-1} (p l - r) / (m - r),
//! ```
//!
//! which is exactly Kronecker at the nodes and has closed-form gradients.

use crate::error::{Error, Result};

/// Lagrange element of degree `p` on the reference triangle
/// `(0,0), (1,0), (0,1)`.
#[derive(Clone, Debug)]
pub struct ReferenceElement {
    pub degree: usize,
    /// Reference coordinates of the nodes, one per shape function.
    pub node_coords: Vec<[f64; 2]>,
    /// Barycentric lattice index `(a, b, c)` of each node, `a + b + c = p`.
    lattice: Vec<[usize; 3]>,
}

impl ReferenceElement {
    pub fn lagrange(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidMesh(
                "element degree must be at least 1".into(),
            ));
        }
        let p = degree;
        let mut lattice = Vec::with_capacity((p + 1) * (p + 2) / 2);
        let mut node_coords = Vec::with_capacity(lattice.capacity());
        // row-major over the lattice: bottom row left to right, then upward,
        // so the corners appear in the order (0,0), (1,0), (0,1)
        for c in 0..=p {
            for b in 0..=(p - c) {
                let a = p - b - c;
                lattice.push([a, b, c]);
                node_coords.push([b as f64 / p as f64, c as f64 / p as f64]);
            }
        }
        Ok(Self {
            degree,
            node_coords,
            lattice,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.lattice.len()
    }

    /// Barycentric lattice indices of the nodes.
    pub fn lattice(&self) -> &[[usize; 3]] {
        &self.lattice
    }

    /// All shape function values at a reference point.
    pub fn shape_values(&self, xi: f64, eta: f64) -> Vec<f64> {
        let lambda = [1.0 - xi - eta, xi, eta];
        let p = self.degree;
        self.lattice
            .iter()
            .map(|&[a, b, c]| {
                lattice_poly(a, p, lambda[0]).0
                    * lattice_poly(b, p, lambda[1]).0
                    * lattice_poly(c, p, lambda[2]).0
            })
            .collect()
    }

    /// Shape function values and reference gradients at a point.
    pub fn eval(&self, xi: f64, eta: f64) -> (Vec<f64>, Vec<[f64; 2]>) {
        let lambda = [1.0 - xi - eta, xi, eta];
        let p = self.degree;
        let mut values = Vec::with_capacity(self.n_nodes());
        let mut grads = Vec::with_capacity(self.n_nodes());
        for &[a, b, c] in &self.lattice {
            let (p0, d0) = lattice_poly(a, p, lambda[0]);
            let (p1, d1) = lattice_poly(b, p, lambda[1]);
            let (p2, d2) = lattice_poly(c, p, lambda[2]);
            values.push(p0 * p1 * p2);
            // chain rule: d lambda / d xi = (-1, 1, 0), d lambda / d eta = (-1, 0, 1)
            let g0 = d0 * p1 * p2;
            let g1 = p0 * d1 * p2;
            let g2 = p0 * p1 * d2;
            grads.push([g1 - g0, g2 - g0]);
        }
        (values, grads)
    }
}

/// Value and derivative (w.r.t. `lambda`) of
/// `P_m(lambda) = prod_{r=0}^{m-1} (p lambda - r) / (m - r)`, with `P_0 = 1`.
fn lattice_poly(m: usize, p: usize, lambda: f64) -> (f64, f64) {
    let mut value = 1.0;
    let mut deriv = 0.0;
    for r in 0..m {
        let factor = (p as f64 * lambda - r as f64) / (m - r) as f64;
        // product rule, updated incrementally
        deriv = deriv * factor + value * p as f64 / (m - r) as f64;
        value *= factor;
    }
    (value, deriv)
}
