//! Element-wise assembly of mass/stiffness matrices and load vectors.
//!
//! `Discretization` bundles a mesh with a reference element, a quadrature
//! rule and the dof map, and precomputes the shape tables and per-cell
//! affine geometry that every assembly pass and field evaluation needs.
//! Everything is immutable after construction.

use nalgebra::{DMatrix, DVector};

use crate::dofmap::DofMap;
use crate::element::ReferenceElement;
use crate::error::{Error, Result};
use crate::mesh::TriMesh;
use crate::quadrature::QuadratureRule;

/// Dense symmetric matrix, exactly symmetric by construction: assembly
/// accumulates only the upper triangle, which is mirrored on finalization.
#[derive(Clone, Debug)]
pub struct SymmetricMatrix {
    data: DMatrix<f64>,
}

impl SymmetricMatrix {
    /// Mirrors the strict upper triangle of `upper` onto the lower one.
    fn from_upper(mut upper: DMatrix<f64>) -> Self {
        let n = upper.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                upper[(j, i)] = upper[(i, j)];
            }
        }
        Self { data: upper }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// Largest `|A_ij - A_ji|`; zero by construction.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)]).abs());
            }
        }
        worst
    }
}

/// Per-cell affine geometry: `x = origin + J * (xi, eta)`.
#[derive(Clone, Debug)]
struct CellGeometry {
    origin: [f64; 2],
    jac: [[f64; 2]; 2],
    /// `|det J|`, twice the triangle area.
    det: f64,
    /// `J^{-T}`, mapping reference gradients to physical ones.
    inv_t: [[f64; 2]; 2],
}

/// A mesh equipped with an element, a quadrature rule and a dof map.
#[derive(Debug)]
pub struct Discretization {
    pub mesh: TriMesh,
    pub element: ReferenceElement,
    pub quadrature: QuadratureRule,
    pub dofs: DofMap,
    /// Shape values at the quadrature points: `shape_values[q][loc]`.
    pub(crate) shape_values: Vec<Vec<f64>>,
    /// Reference gradients at the quadrature points.
    pub(crate) shape_grads: Vec<Vec<[f64; 2]>>,
    cells: Vec<CellGeometry>,
}

impl Discretization {
    /// Builds the degree-`p` discretization of `mesh` with the default
    /// quadrature rule of degree `3 p`, enough for the cubic reaction terms
    /// of products of degree-`p` fields.
    pub fn new(mesh: TriMesh, degree: usize) -> Result<Self> {
        let element = ReferenceElement::lagrange(degree)?;
        let quadrature = QuadratureRule::triangle(3 * degree);
        Self::with_quadrature(mesh, element, quadrature)
    }

    pub fn with_quadrature(
        mesh: TriMesh,
        element: ReferenceElement,
        quadrature: QuadratureRule,
    ) -> Result<Self> {
        let dofs = DofMap::build(&mesh, &element)?;

        let mut shape_values = Vec::with_capacity(quadrature.len());
        let mut shape_grads = Vec::with_capacity(quadrature.len());
        for &[xi, eta] in &quadrature.points {
            let (values, grads) = element.eval(xi, eta);
            shape_values.push(values);
            shape_grads.push(grads);
        }

        let mut cells = Vec::with_capacity(mesh.n_triangles());
        for k in 0..mesh.n_triangles() {
            let [p0, p1, p2] = mesh.triangle_coords(k);
            let jac = [
                [p1[0] - p0[0], p2[0] - p0[0]],
                [p1[1] - p0[1], p2[1] - p0[1]],
            ];
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if det <= 0.0 {
                return Err(Error::InvalidMesh(format!(
                    "triangle {k} is degenerate or inverted (det J = {det})"
                )));
            }
            let inv_t = [
                [jac[1][1] / det, -jac[1][0] / det],
                [-jac[0][1] / det, jac[0][0] / det],
            ];
            cells.push(CellGeometry {
                origin: p0,
                jac,
                det,
                inv_t,
            });
        }

        Ok(Self {
            mesh,
            element,
            quadrature,
            dofs,
            shape_values,
            shape_grads,
            cells,
        })
    }

    pub fn n_dofs(&self) -> usize {
        self.dofs.n_dofs
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// Physical coordinates of quadrature point `q` in cell `k`.
    pub fn quad_point(&self, k: usize, q: usize) -> [f64; 2] {
        let geo = &self.cells[k];
        let [xi, eta] = self.quadrature.points[q];
        [
            geo.origin[0] + geo.jac[0][0] * xi + geo.jac[0][1] * eta,
            geo.origin[1] + geo.jac[1][0] * xi + geo.jac[1][1] * eta,
        ]
    }

    /// Quadrature weight of point `q` in cell `k` scaled by `|det J|`.
    pub fn quad_weight(&self, k: usize, q: usize) -> f64 {
        self.quadrature.weights[q] * self.cells[k].det
    }

    /// Local mass matrix of cell `k`.
    pub fn local_mass(&self, k: usize) -> DMatrix<f64> {
        let n = self.element.n_nodes();
        let det = self.cells[k].det;
        let mut m = DMatrix::zeros(n, n);
        for (q, values) in self.shape_values.iter().enumerate() {
            let w = self.quadrature.weights[q] * det;
            for a in 0..n {
                let wa = w * values[a];
                for b in a..n {
                    m[(a, b)] += wa * values[b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                m[(a, b)] = m[(b, a)];
            }
        }
        m
    }

    /// Local stiffness matrix of cell `k` (physical gradients).
    pub fn local_stiffness(&self, k: usize) -> DMatrix<f64> {
        let n = self.element.n_nodes();
        let geo = &self.cells[k];
        let mut kk = DMatrix::zeros(n, n);
        let mut phys: Vec<[f64; 2]> = vec![[0.0; 2]; n];
        for (q, grads) in self.shape_grads.iter().enumerate() {
            let w = self.quadrature.weights[q] * geo.det;
            for (a, g) in grads.iter().enumerate() {
                phys[a] = [
                    geo.inv_t[0][0] * g[0] + geo.inv_t[0][1] * g[1],
                    geo.inv_t[1][0] * g[0] + geo.inv_t[1][1] * g[1],
                ];
            }
            for a in 0..n {
                for b in a..n {
                    kk[(a, b)] += w * (phys[a][0] * phys[b][0] + phys[a][1] * phys[b][1]);
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                kk[(a, b)] = kk[(b, a)];
            }
        }
        kk
    }

    /// Global mass matrix `M_ij = (rho_i, rho_j)`.
    pub fn assemble_mass(&self) -> SymmetricMatrix {
        self.assemble_symmetric(|k| self.local_mass(k))
    }

    /// Global stiffness matrix `K_ij = (grad rho_i, grad rho_j)`;
    /// positive semi-definite with the constant function in its nullspace.
    pub fn assemble_stiffness(&self) -> SymmetricMatrix {
        self.assemble_symmetric(|k| self.local_stiffness(k))
    }

    fn assemble_symmetric(&self, local: impl Fn(usize) -> DMatrix<f64>) -> SymmetricMatrix {
        let n = self.n_dofs();
        let n_loc = self.element.n_nodes();
        let mut upper = DMatrix::zeros(n, n);
        for k in 0..self.n_cells() {
            let loc = local(k);
            let dofs = self.dofs.cell(k);
            for a in 0..n_loc {
                for b in a..n_loc {
                    let (i, j) = (dofs[a], dofs[b]);
                    let (i, j) = (i.min(j), i.max(j));
                    upper[(i, j)] += loc[(a, b)];
                }
            }
        }
        SymmetricMatrix::from_upper(upper)
    }

    /// Load vector `b_i = (f, rho_i)` by element-wise quadrature.
    /// Fails if `f` is non-finite at any quadrature point.
    pub fn assemble_load(&self, f: &dyn Fn(f64, f64) -> f64) -> Result<DVector<f64>> {
        let mut b = DVector::zeros(self.n_dofs());
        for k in 0..self.n_cells() {
            let dofs = self.dofs.cell(k);
            for q in 0..self.quadrature.len() {
                let [x, y] = self.quad_point(k, q);
                let fv = f(x, y);
                if !fv.is_finite() {
                    return Err(Error::NonFiniteField {
                        context: "load integrand".into(),
                        x,
                        y,
                        value: fv,
                    });
                }
                let w = self.quad_weight(k, q) * fv;
                for (loc, &g) in dofs.iter().enumerate() {
                    b[g] += w * self.shape_values[q][loc];
                }
            }
        }
        Ok(b)
    }

    /// Value and physical gradient of the finite element function with nodal
    /// coefficients `coeffs` at reference point `(xi, eta)` of cell `k`.
    pub fn evaluate(&self, coeffs: &DVector<f64>, k: usize, xi: f64, eta: f64) -> (f64, [f64; 2]) {
        let (values, grads) = self.element.eval(xi, eta);
        let geo = &self.cells[k];
        let mut v = 0.0;
        let mut gr = [0.0, 0.0];
        for (loc, &g) in self.dofs.cell(k).iter().enumerate() {
            let c = coeffs[g];
            v += c * values[loc];
            gr[0] += c * grads[loc][0];
            gr[1] += c * grads[loc][1];
        }
        let phys = [
            geo.inv_t[0][0] * gr[0] + geo.inv_t[0][1] * gr[1],
            geo.inv_t[1][0] * gr[0] + geo.inv_t[1][1] * gr[1],
        ];
        (v, phys)
    }

    /// Evaluates the finite element function at a physical point.
    pub fn evaluate_at(&self, coeffs: &DVector<f64>, x: f64, y: f64) -> Result<(f64, [f64; 2])> {
        if coeffs.len() != self.n_dofs() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient vector has length {}, expected {}",
                coeffs.len(),
                self.n_dofs()
            )));
        }
        let (k, [xi, eta]) = self.mesh.locate_point(x, y);
        Ok(self.evaluate(coeffs, k, xi, eta))
    }

    /// Integrates `g(x, y)` over the domain with the discretization's rule.
    pub fn integrate(&self, g: &dyn Fn(f64, f64) -> f64) -> f64 {
        let mut total = 0.0;
        for k in 0..self.n_cells() {
            for q in 0..self.quadrature.len() {
                let [x, y] = self.quad_point(k, q);
                total += self.quad_weight(k, q) * g(x, y);
            }
        }
        total
    }

    /// Integrates `(u_h - g)^2` where `u_h` has nodal coefficients `nodal`.
    pub fn l2_error_nodal(&self, nodal: &DVector<f64>, g: &dyn Fn(f64, f64) -> f64) -> f64 {
        self.l2_error_and_norm(nodal, g).0
    }

    /// One quadrature pass returning `(|u_h - g|_L2, |g|_L2)`; the exact
    /// field is evaluated directly at the quadrature points, never projected.
    pub fn l2_error_and_norm(&self, nodal: &DVector<f64>, g: &dyn Fn(f64, f64) -> f64) -> (f64, f64) {
        let mut err = 0.0;
        let mut norm = 0.0;
        for k in 0..self.n_cells() {
            let dofs = self.dofs.cell(k);
            for q in 0..self.quadrature.len() {
                let values = &self.shape_values[q];
                let mut uh = 0.0;
                for (loc, &gd) in dofs.iter().enumerate() {
                    uh += nodal[gd] * values[loc];
                }
                let [x, y] = self.quad_point(k, q);
                let gv = g(x, y);
                let w = self.quad_weight(k, q);
                let diff = uh - gv;
                err += w * diff * diff;
                norm += w * gv * gv;
            }
        }
        (err.max(0.0).sqrt(), norm.max(0.0).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_structured_mesh, RectDomain};
    use approx::assert_relative_eq;

    fn disc(cells: usize, degree: usize) -> Discretization {
        let mesh = build_structured_mesh(RectDomain::unit_square(), cells).unwrap();
        Discretization::new(mesh, degree).unwrap()
    }

    #[test]
    fn local_mass_of_unit_right_triangles() {
        // Both triangles of the one-cell unit square have area 1/2; the P1
        // mass matrix of any triangle is area/12 * [[2,1,1],[1,2,1],[1,1,2]].
        let d = disc(1, 1);
        for k in 0..2 {
            let m = d.local_mass(k);
            let area = d.mesh.triangle_area(k);
            for a in 0..3 {
                for b in 0..3 {
                    let expect = area / 12.0 * if a == b { 2.0 } else { 1.0 };
                    assert_relative_eq!(m[(a, b)], expect, max_relative = 1e-13);
                }
            }
        }
    }

    #[test]
    fn local_stiffness_of_structured_cell() {
        // Hand-computed for the two triangles of the unit cell:
        // lower (0,0),(1,0),(1,1) and upper (0,0),(1,1),(0,1).
        let d = disc(1, 1);
        let expect_lower = [[0.5, -0.5, 0.0], [-0.5, 1.0, -0.5], [0.0, -0.5, 0.5]];
        let expect_upper = [[0.5, 0.0, -0.5], [0.0, 0.5, -0.5], [-0.5, -0.5, 1.0]];
        let lower = d.local_stiffness(0);
        let upper = d.local_stiffness(1);
        for a in 0..3 {
            for b in 0..3 {
                assert!((lower[(a, b)] - expect_lower[a][b]).abs() <= 1e-13);
                assert!((upper[(a, b)] - expect_upper[a][b]).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn mass_entries_sum_to_domain_area() {
        for (cells, degree) in [(2, 1), (3, 2), (2, 3)] {
            let d = disc(cells, degree);
            let m = d.assemble_mass();
            let sum: f64 = m.matrix().iter().sum();
            assert_relative_eq!(sum, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn mass_is_positive_definite() {
        let d = disc(2, 1);
        let m = d.assemble_mass().into_matrix();
        assert!(m.cholesky().is_some());
    }

    #[test]
    fn stiffness_kills_constants() {
        let d = disc(3, 3);
        let k = d.assemble_stiffness();
        let ones = DVector::from_element(d.n_dofs(), 1.0);
        let r = k.matrix() * ones;
        assert!(r.amax() <= 1e-11);
    }

    #[test]
    fn assembled_matrices_are_exactly_symmetric() {
        let d = disc(3, 2);
        assert_eq!(d.assemble_mass().max_asymmetry(), 0.0);
        assert_eq!(d.assemble_stiffness().max_asymmetry(), 0.0);
    }

    #[test]
    fn load_of_zero_and_one() {
        let d = disc(2, 2);
        let zero = d.assemble_load(&|_, _| 0.0).unwrap();
        assert_eq!(zero.amax(), 0.0);

        let one = d.assemble_load(&|_, _| 1.0).unwrap();
        let m = d.assemble_mass();
        let row_sums = m.matrix() * DVector::from_element(d.n_dofs(), 1.0);
        assert!((one - row_sums).amax() <= 1e-13);
    }

    #[test]
    fn load_of_x_sums_to_its_integral() {
        // sum_i b_i = integral of x over the unit square = 1/2
        let d = disc(2, 1);
        let b = d.assemble_load(&|x, _| x).unwrap();
        assert_relative_eq!(b.sum(), 0.5, max_relative = 1e-13);
    }

    #[test]
    fn load_rejects_non_finite_field() {
        let d = disc(1, 1);
        let err = d
            .assemble_load(&|x, _| if x > 0.1 { f64::NAN } else { 1.0 })
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("non-finite"), "unexpected error: {msg}");
        assert!(msg.contains("at point"), "should name the point: {msg}");
    }

    #[test]
    fn evaluate_partition_of_unity_and_linears() {
        let d = disc(3, 2);
        let ones = DVector::from_element(d.n_dofs(), 1.0);
        let (v, g) = d.evaluate_at(&ones, 0.37, 0.83).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-12);
        assert!(g[0].abs() <= 1e-11 && g[1].abs() <= 1e-11);

        // nodal interpolant of x + y is reproduced exactly
        let pos = d.dofs.node_positions(&d.mesh, &d.element);
        let nodal = DVector::from_fn(d.n_dofs(), |i, _| pos[i][0] + pos[i][1]);
        for &(x, y) in &[(0.1, 0.2), (0.5, 0.5), (0.93, 0.08)] {
            let (v, g) = d.evaluate_at(&nodal, x, y).unwrap();
            assert_relative_eq!(v, x + y, max_relative = 1e-12);
            assert!((g[0] - 1.0).abs() <= 1e-11 && (g[1] - 1.0).abs() <= 1e-11);
        }
    }

    #[test]
    fn evaluate_unit_vector_gives_shape_function() {
        let d = disc(2, 2);
        // pick the dof at a known node of cell 3 and evaluate inside that cell
        let k = 3;
        let dofs = d.dofs.cell(k).to_vec();
        let target = dofs[4];
        let mut e = DVector::zeros(d.n_dofs());
        e[target] = 1.0;
        let (xi, eta) = (0.21, 0.33);
        let (v, _) = d.evaluate(&e, k, xi, eta);
        let shapes = d.element.shape_values(xi, eta);
        assert_relative_eq!(v, shapes[4], max_relative = 1e-13);
    }

    #[test]
    fn evaluate_rejects_wrong_length() {
        let d = disc(2, 1);
        let bad = DVector::zeros(d.n_dofs() + 1);
        assert!(d.evaluate_at(&bad, 0.5, 0.5).is_err());
    }

    #[test]
    fn assembly_invariant_under_vertex_permutation() {
        // Rotating the vertex order of some triangles must not change the
        // assembled operators (same global dof numbering, reassembled map).
        let mesh = build_structured_mesh(RectDomain::unit_square(), 2).unwrap();
        let mut permuted = mesh.clone();
        for (k, tri) in permuted.triangles.iter_mut().enumerate() {
            if k % 2 == 0 {
                *tri = [tri[1], tri[2], tri[0]];
            }
        }
        for degree in [1, 2, 3] {
            let da = Discretization::new(mesh.clone(), degree).unwrap();
            let db = Discretization::new(permuted.clone(), degree).unwrap();
            let ma = da.assemble_mass().into_matrix();
            let mb = db.assemble_mass().into_matrix();
            assert!((ma - mb).amax() <= 1e-12, "mass, degree {degree}");
            let ka = da.assemble_stiffness().into_matrix();
            let kb = db.assemble_stiffness().into_matrix();
            assert!((ka - kb).amax() <= 1e-11, "stiffness, degree {degree}");
        }
    }

    #[test]
    fn integrate_matches_closed_forms() {
        let d = disc(4, 2);
        assert_relative_eq!(d.integrate(&|_, _| 1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(d.integrate(&|x, y| x * y), 0.25, max_relative = 1e-13);
    }
}
