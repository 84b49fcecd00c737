//! Maps the stability frontier of the two-stage scheme empirically.
//!
//! For pure diffusion the whole step multiplies mode j by
//! `T(k) = (4k^2 - 3k + 1) / (1 + k)` with `k = sigma alpha lambda_j / 4`:
//! contractive for k < 1, neutral at k = 1, growing beyond. This example
//! seeds the highest mode and compares measured growth per step against
//! `T(k)` on both sides of the frontier.
//!
//!     cargo run --release --example stability_region

use std::sync::Arc;

use gs_spectral::*;

fn predicted_growth(k: f64) -> f64 {
    (4.0 * k * k - 3.0 * k + 1.0) / (1.0 + k)
}

fn main() -> Result<()> {
    let mesh = build_structured_mesh(RectDomain::unit_square(), 4)?;
    let disc = Arc::new(Discretization::new(mesh, 3)?);
    let basis = SpectralBasis::compute(disc)?;
    let n = basis.n_modes();
    let lambda = basis.lambda_max();
    println!("highest mode: lambda = {lambda:.1}");
    println!("{:>6} {:>12} {:>12} {:>10}", "k", "measured", "predicted", "stable");

    let problem = GrayScottProblem::example1(); // alpha = 1
    let zero = |_: f64, _: f64, _: f64, _: f64, _: f64| (0.0, 0.0);
    for k in [0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0] {
        let sigma = 4.0 * k / lambda;
        let steps = 60usize;
        let grid = TimeGrid::new(sigma * steps as f64, steps)?;
        let solver = ImexSolver::new(&basis, &problem, grid, StepperConfig::default())?
            .with_reaction(&zero);

        // seed the top mode directly and run the two stages by hand
        let mut state = solver.initialize()?;
        state.u_whole.values[n - 1] = 1.0;
        state.u_half.values[n - 1] = 1.0;
        let (u1, v1, _) = solver.stage2_implicit(&state.u_half, &state.v_half)?;
        state.u_whole = u1;
        state.v_whole = v1;
        state.step = 1;

        // the whole-step amplitude alone can pass through exact zeros
        // (r = 0 at k = 1), so measure the (whole, half) pair norm
        let pair_norm = |s: &SolverState| s.u_whole.values[n - 1].hypot(s.u_half.values[n - 1]);
        let mut previous = pair_norm(&state).max(1e-300);
        let mut ratios = Vec::new();
        for _ in 1..steps {
            let (uh, vh) = solver.stage1_explicit(&state)?;
            let (uw, vw, _) = solver.stage2_implicit(&uh, &vh)?;
            state.u_half = uh;
            state.v_half = vh;
            state.u_whole = uw;
            state.v_whole = vw;
            state.step += 1;
            let amp = pair_norm(&state);
            ratios.push(amp / previous);
            previous = amp.max(1e-300);
            if !amp.is_finite() || amp > 1e30 {
                break;
            }
        }
        // geometric mean of the late-step ratios
        let tail = &ratios[ratios.len().saturating_sub(20)..];
        let measured = tail.iter().map(|r| r.ln()).sum::<f64>() / tail.len() as f64;
        let measured = measured.exp();
        println!(
            "{:>6.2} {:>12.6} {:>12.6} {:>10}",
            k,
            measured,
            predicted_growth(k),
            if measured <= 1.0 + 1e-9 { "yes" } else { "no" }
        );
    }
    Ok(())
}
