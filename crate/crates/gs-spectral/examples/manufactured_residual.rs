//! Verifies the manufactured benchmarks by residual: substituting the exact
//! fields into the modified equations must leave a residual at the level of
//! the finite-difference truncation used for the check.
//!
//!     cargo run --release --example manufactured_residual

use gs_spectral::*;

fn main() {
    for problem in [GrayScottProblem::example1(), GrayScottProblem::example2()] {
        let d = problem.domain;
        let mut worst = (0.0f64, 0.0f64);
        for i in 0..7 {
            for j in 0..7 {
                let x = d.x_min + d.width() * (0.07 + 0.13 * i as f64);
                let y = d.y_min + d.height() * (0.11 + 0.12 * j as f64);
                let t = 0.05 + 0.13 * (i * 7 + j) as f64 / 49.0;
                let (r1, r2) = problem.manufactured_residual(x, y, t).unwrap();
                worst.0 = worst.0.max(r1.abs());
                worst.1 = worst.1.max(r2.abs());
            }
        }
        println!(
            "{}: max residual over 49 samples = ({:.2e}, {:.2e})",
            problem.name, worst.0, worst.1
        );
    }
}
