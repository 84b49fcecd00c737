//! Spectral Galerkin finite element solver for the two-dimensional
//! Gray-Scott reaction-diffusion system.
//!
//! The diffusion operator is diagonalized in the eigenbasis of the discrete
//! Laplacian on a continuous Lagrange space over a structured triangulation,
//! and the system is advanced with a two-stage explicit/implicit scheme of
//! second order in time. A convergence harness reproduces manufactured- and
//! reference-solution error tables.
//!
//! Start with the runnable examples (`cargo run --release --example ...`) or
//! the `gs-spectral run` command line.

// validation guards use `!(x > 0.0)` on purpose: the negated form rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod basis;
pub mod dofmap;
pub mod element;
pub mod error;
pub mod harness;
pub mod mesh;
pub mod model;
pub mod quadrature;
pub mod stepper;

pub use assembly::{Discretization, SymmetricMatrix};
pub use basis::{PointReaction, SpectralBasis, SpectralCoeffs};
pub use dofmap::DofMap;
pub use element::ReferenceElement;
pub use error::{Error, Result};
pub use mesh::{build_structured_mesh, BoundaryEdge, BoundarySide, RectDomain, TriMesh};
pub use model::{GrayScottParams, GrayScottProblem};
pub use quadrature::QuadratureRule;
pub use stepper::{ImexSolver, RunSummary, SolverState, StepperConfig, TimeGrid};
