//! Short pattern-formation run: integrates the localized-seed benchmark and
//! writes field snapshots for external plotting.
//!
//!     cargo run --release --example pattern_snapshots [-- out_dir]

use std::sync::Arc;

use gs_spectral::harness::FieldSnapshot;
use gs_spectral::*;

fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out".into());
    std::fs::create_dir_all(&out)?;

    let t_final = 50.0;
    let problem = GrayScottProblem::example3().with_t_final(t_final);
    let mesh = build_structured_mesh(problem.domain, 16)?;
    let disc = Arc::new(Discretization::new(mesh, 3)?);
    eprintln!("building basis ({} dofs)...", disc.n_dofs());
    let basis = SpectralBasis::compute(disc)?;

    let grid = TimeGrid::from_step(t_final, 0.5f64.powi(5))?;
    let solver = ImexSolver::new(&basis, &problem, grid, StepperConfig::default())?;
    eprintln!("running {} steps...", grid.n_steps);

    let snapshot_times = [0.0, 10.0, 25.0, 50.0];
    let mut wanted: Vec<usize> = snapshot_times
        .iter()
        .map(|t| (t / grid.sigma).round() as usize)
        .collect();
    wanted.dedup();

    let mut written = Vec::new();
    solver.run(|step, t, u, v| {
        if wanted.contains(&step) {
            let snap = FieldSnapshot::sample(&basis, u, v, t, 64).expect("sampling");
            let path = format!("{out}/pattern_t{t:.0}.txt");
            let file = std::fs::File::create(&path).expect("create snapshot file");
            snap.write(std::io::BufWriter::new(file)).expect("write");
            written.push(path);
        }
    })?;

    for path in written {
        println!("wrote {path}");
    }
    Ok(())
}
