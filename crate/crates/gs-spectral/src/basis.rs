//! Orthogonal eigenbasis of the discrete Laplacian and spectral transforms.
//!
//! The basis `{phi_j}` solves the generalized symmetric eigenproblem
//! `K phi = lambda M phi` with mass matrix `M` and stiffness matrix `K`.
//! Its columns are simultaneously L2-orthonormal and stiffness-orthogonal,
//! which diagonalizes the diffusion part of the time stepper: the implicit
//! stage reduces to a scalar solve per mode. Under homogeneous Neumann
//! conditions the first eigenpair is the constant mode with `lambda_1 = 0`.

use std::io::Write;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::assembly::{Discretization, SymmetricMatrix};
use crate::error::{Error, Result};

/// Per-point reaction map `(x, y, t, u, v) -> (F1, F2)` evaluated at
/// quadrature points on the reconstructed fields.
pub trait PointReaction: Sync {
    fn eval(&self, x: f64, y: f64, t: f64, u: f64, v: f64) -> (f64, f64);
}

impl<F> PointReaction for F
where
    F: Fn(f64, f64, f64, f64, f64) -> (f64, f64) + Sync,
{
    fn eval(&self, x: f64, y: f64, t: f64, u: f64, v: f64) -> (f64, f64) {
        self(x, y, t, u, v)
    }
}

/// Coefficients of one species in the eigenbasis, tagged with the time they
/// represent.
#[derive(Clone, Debug)]
pub struct SpectralCoeffs {
    pub values: DVector<f64>,
    pub time: f64,
}

impl SpectralCoeffs {
    pub fn new(values: DVector<f64>, time: f64) -> Self {
        Self { values, time }
    }

    pub fn zeros(n: usize, time: f64) -> Self {
        Self {
            values: DVector::zeros(n),
            time,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// L2-orthonormal, stiffness-orthogonal eigenbasis of a discretization.
#[derive(Debug)]
pub struct SpectralBasis {
    disc: Arc<Discretization>,
    /// Eigenvalues in ascending order; `eigenvalues[0] ~ 0` (constant mode).
    eigenvalues: DVector<f64>,
    /// Columns are the nodal coefficient vectors of the modes.
    modes: DMatrix<f64>,
    mass: DMatrix<f64>,
}

impl SpectralBasis {
    /// Assembles mass and stiffness on `disc` and solves the eigenproblem.
    pub fn compute(disc: Arc<Discretization>) -> Result<Self> {
        let mass = disc.assemble_mass();
        let stiffness = disc.assemble_stiffness();
        Self::from_matrices(disc, mass, &stiffness)
    }

    /// Solves `K phi = lambda M phi` given assembled matrices.
    ///
    /// `M` must be symmetric positive definite (detected through its
    /// Cholesky factorization), `K` symmetric positive semi-definite. The
    /// problem is reduced to a standard symmetric one through `M = L L^T`;
    /// eigenvectors come back M-orthonormal with eigenvalues ascending, and
    /// each mode is sign-fixed so its entry of largest magnitude is positive.
    pub fn from_matrices(
        disc: Arc<Discretization>,
        mass: SymmetricMatrix,
        stiffness: &SymmetricMatrix,
    ) -> Result<Self> {
        let n = mass.dim();
        if stiffness.dim() != n || disc.n_dofs() != n {
            return Err(Error::DimensionMismatch(format!(
                "mass {n} x {n}, stiffness {s} x {s}, discretization with {d} dofs",
                s = stiffness.dim(),
                d = disc.n_dofs()
            )));
        }
        let mass = mass.into_matrix();
        let chol = mass.clone().cholesky().ok_or_else(|| {
            Error::Factorization("mass matrix is not positive definite".into())
        })?;
        let l = chol.l();

        // C = L^{-1} K L^{-T}, symmetrized against roundoff
        let x = l
            .solve_lower_triangular(stiffness.matrix())
            .ok_or_else(|| Error::Factorization("singular Cholesky factor".into()))?;
        let c = l
            .solve_lower_triangular(&x.transpose())
            .ok_or_else(|| Error::Factorization("singular Cholesky factor".into()))?;
        let c = 0.5 * (&c + c.transpose());

        let eig = SymmetricEigen::new(c);

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());

        let mut q = DMatrix::zeros(n, n);
        let mut eigenvalues = DVector::zeros(n);
        for (dst, &src) in order.iter().enumerate() {
            q.set_column(dst, &eig.eigenvectors.column(src));
            // K is PSD; tiny negative values are eigensolver roundoff
            eigenvalues[dst] = eig.eigenvalues[src].max(0.0);
        }

        // back-transform: phi = L^{-T} q
        let mut modes = l
            .tr_solve_lower_triangular(&q)
            .ok_or_else(|| Error::Factorization("singular Cholesky factor".into()))?;

        // sign convention: largest-magnitude entry of each mode is positive
        for j in 0..n {
            let mut col = modes.column_mut(j);
            let mut idx = 0;
            let mut best = 0.0_f64;
            for (i, &v) in col.iter().enumerate() {
                if v.abs() > best {
                    best = v.abs();
                    idx = i;
                }
            }
            if col[idx] < 0.0 {
                col.neg_mut();
            }
        }

        Ok(Self {
            disc,
            eigenvalues,
            modes,
            mass,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.n_modes() - 1]
    }

    /// Nodal coefficient matrix of the modes, one column per mode.
    pub fn modes(&self) -> &DMatrix<f64> {
        &self.modes
    }

    pub fn mass(&self) -> &DMatrix<f64> {
        &self.mass
    }

    pub fn discretization(&self) -> &Arc<Discretization> {
        &self.disc
    }

    /// L2 projection of a scalar field: `c_j = (f, phi_j)`.
    pub fn project_l2(&self, f: &dyn Fn(f64, f64) -> f64, time: f64) -> Result<SpectralCoeffs> {
        let load = self.disc.assemble_load(f)?;
        Ok(SpectralCoeffs::new(self.modes.tr_mul(&load), time))
    }

    /// Nodal coefficients of the reconstruction `sum_j c_j phi_j`.
    pub fn to_nodal(&self, coeffs: &SpectralCoeffs) -> Result<DVector<f64>> {
        self.to_nodal_vec(&coeffs.values)
    }

    pub fn to_nodal_vec(&self, values: &DVector<f64>) -> Result<DVector<f64>> {
        if values.len() != self.n_modes() {
            return Err(Error::DimensionMismatch(format!(
                "spectral vector has length {}, basis has {} modes",
                values.len(),
                self.n_modes()
            )));
        }
        Ok(&self.modes * values)
    }

    /// Spectral coefficients of the function with nodal coefficients `b`:
    /// `c = Phi^T M b`.
    pub fn from_nodal(&self, nodal: &DVector<f64>, time: f64) -> Result<SpectralCoeffs> {
        if nodal.len() != self.n_modes() {
            return Err(Error::DimensionMismatch(format!(
                "nodal vector has length {}, expected {}",
                nodal.len(),
                self.n_modes()
            )));
        }
        let mb = &self.mass * nodal;
        Ok(SpectralCoeffs::new(self.modes.tr_mul(&mb), time))
    }

    /// Evaluates the reconstruction of `coeffs` at a physical point.
    pub fn evaluate_at(&self, coeffs: &SpectralCoeffs, x: f64, y: f64) -> Result<f64> {
        let nodal = self.to_nodal(coeffs)?;
        Ok(self.disc.evaluate_at(&nodal, x, y)?.0)
    }

    /// Spectral components of the reaction applied to the reconstructed pair
    /// `(u_h, v_h)`: `G^l_j = (F_l(t, u_h, v_h), phi_j)`, evaluated by
    /// element-wise quadrature.
    ///
    /// Fails with the time and location attached when the reaction returns a
    /// non-finite value, which is how solution blow-up surfaces here.
    pub fn nonlinear_functional(
        &self,
        t: f64,
        u: &SpectralCoeffs,
        v: &SpectralCoeffs,
        reaction: &dyn PointReaction,
    ) -> Result<(DVector<f64>, DVector<f64>)> {
        let n = self.n_modes();
        if u.len() != n || v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "state lengths {} / {}, basis has {n} modes",
                u.len(),
                v.len()
            )));
        }
        // reconstruct both species at once: nodal = Phi * [c_u c_v]
        let mut spectral = DMatrix::zeros(n, 2);
        spectral.set_column(0, &u.values);
        spectral.set_column(1, &v.values);
        let nodal = &self.modes * spectral;

        let disc = &*self.disc;
        let n_quad = disc.quadrature.len();
        let mut loads = DMatrix::zeros(n, 2);
        for k in 0..disc.n_cells() {
            let dofs = disc.dofs.cell(k);
            for q in 0..n_quad {
                let values = &disc.shape_values[q];
                let mut uq = 0.0;
                let mut vq = 0.0;
                for (loc, &g) in dofs.iter().enumerate() {
                    uq += nodal[(g, 0)] * values[loc];
                    vq += nodal[(g, 1)] * values[loc];
                }
                let [x, y] = disc.quad_point(k, q);
                let (f1, f2) = reaction.eval(x, y, t, uq, vq);
                if !(f1.is_finite() && f2.is_finite()) {
                    return Err(Error::NonFiniteField {
                        context: format!("reaction at t = {t}"),
                        x,
                        y,
                        value: if f1.is_finite() { f2 } else { f1 },
                    });
                }
                let w = disc.quad_weight(k, q);
                let (w1, w2) = (w * f1, w * f2);
                for (loc, &g) in dofs.iter().enumerate() {
                    loads[(g, 0)] += w1 * values[loc];
                    loads[(g, 1)] += w2 * values[loc];
                }
            }
        }
        let g = self.modes.tr_mul(&loads);
        Ok((g.column(0).into_owned(), g.column(1).into_owned()))
    }

    /// `max |Phi^T M Phi - I|`; part of the basis contract.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.modes.tr_mul(&(&self.mass * &self.modes));
        let n = self.n_modes();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// `max |Phi^T K Phi - diag(lambda)|` for a given stiffness matrix.
    pub fn stiffness_defect(&self, stiffness: &SymmetricMatrix) -> f64 {
        let gram = self.modes.tr_mul(&(stiffness.matrix() * &self.modes));
        let n = self.n_modes();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { self.eigenvalues[i] } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// Writes the spectrum as CSV with columns `j,lambda`.
    pub fn write_eigenvalues_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "j,lambda")?;
        for (j, lam) in self.eigenvalues.iter().enumerate() {
            writeln!(w, "{},{:e}", j + 1, lam)?;
        }
        Ok(())
    }
}
