//! Convergence of the L2 projection onto the spectral basis: the error for
//! a smooth field decays like h^(p+1) at element degree p.
//!
//!     cargo run --release --example l2_projection

use std::f64::consts::PI;
use std::sync::Arc;

use gs_spectral::*;

fn main() -> Result<()> {
    let f = |x: f64, y: f64| (PI * x).cos() * (PI * y).cos();
    let domain = RectDomain::unit_square();
    for degree in [2usize, 3] {
        println!("degree {degree}:");
        let mut prev: Option<f64> = None;
        for cells in [2usize, 4, 8, 16] {
            let mesh = build_structured_mesh(domain, cells)?;
            let disc = Arc::new(Discretization::new(mesh, degree)?);
            let basis = SpectralBasis::compute(disc)?;
            let coeffs = basis.project_l2(&f, 0.0)?;
            let nodal = basis.to_nodal(&coeffs)?;
            let err = basis.discretization().l2_error_nodal(&nodal, &f);
            match prev {
                Some(p) => println!(
                    "  cells {cells:2}: error {err:.4e}  rate {:.3}",
                    (p / err).log2()
                ),
                None => println!("  cells {cells:2}: error {err:.4e}"),
            }
            prev = Some(err);
        }
    }
    Ok(())
}
