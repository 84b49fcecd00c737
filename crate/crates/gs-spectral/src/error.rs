//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by mesh construction, assembly, the eigensolver, the
/// time stepper and the convergence harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid mesh or domain parameters.
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    /// Incompatible dimensions between coefficient vectors, matrices or maps.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A scalar field evaluated to a non-finite value at a quadrature point.
    #[error("non-finite value {value} of `{context}` at point ({x}, {y})")]
    NonFiniteField {
        context: String,
        x: f64,
        y: f64,
        value: f64,
    },

    /// A matrix factorization failed (typically: mass matrix not SPD).
    #[error("factorization failed: {0}")]
    Factorization(String),

    /// Solution coefficients left the admissible range during time stepping.
    #[error("solution blow-up at step {step} (t = {time}): {detail}")]
    BlowUp {
        step: usize,
        time: f64,
        detail: String,
    },

    /// The implicit-stage fixed-point iteration did not converge.
    #[error(
        "fixed-point iteration stalled after {iterations} sweeps at t = {time} \
         (residual {residual:.3e}, tolerance {tolerance:.3e})"
    )]
    FixedPointStalled {
        iterations: usize,
        time: f64,
        residual: f64,
        tolerance: f64,
    },

    /// Invalid run configuration (CLI flags or config file).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
