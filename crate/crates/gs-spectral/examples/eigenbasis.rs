//! Builds the eigenbasis of the discrete Laplacian on the unit square and
//! compares its spectrum against the analytic Neumann eigenvalues
//! `pi^2 (m^2 + n^2)`. Optionally dumps the full spectrum as CSV.
//!
//!     cargo run --release --example eigenbasis [-- spectrum.csv]

use std::sync::Arc;

use gs_spectral::*;

fn main() -> Result<()> {
    let mesh = build_structured_mesh(RectDomain::unit_square(), 8)?;
    let disc = Arc::new(Discretization::new(mesh, 3)?);
    let basis = SpectralBasis::compute(disc)?;

    println!(
        "basis with {} modes, orthonormality defect {:.2e}",
        basis.n_modes(),
        basis.orthonormality_defect()
    );

    // analytic Neumann spectrum of the unit square, ascending
    let mut analytic: Vec<f64> = (0..12)
        .flat_map(|m| (0..12).map(move |n| (m * m + n * n) as f64))
        .map(|s| s * std::f64::consts::PI.powi(2))
        .collect();
    analytic.sort_by(|a, b| a.partial_cmp(b).unwrap());

    println!("{:>4} {:>14} {:>14} {:>10}", "j", "computed", "analytic", "rel err");
    for (j, (&lam, &exact)) in basis
        .eigenvalues()
        .iter()
        .zip(&analytic)
        .take(10)
        .enumerate()
    {
        let rel = if exact > 0.0 {
            (lam - exact).abs() / exact
        } else {
            lam.abs()
        };
        println!("{:>4} {:>14.6} {:>14.6} {:>10.2e}", j + 1, lam, exact, rel);
    }

    if let Some(path) = std::env::args().nth(1) {
        let file = std::fs::File::create(&path)?;
        basis.write_eigenvalues_csv(std::io::BufWriter::new(file))?;
        println!("spectrum written to {path}");
    }
    Ok(())
}
