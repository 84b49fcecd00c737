//! Convergence studies: sweep (h, sigma) pairs, collect max-in-time errors,
//! observed orders and timings, and write the table as CSV.
//!
//! Rows sweep in `for h { for sigma }` order. An observed order is attached
//! to a row when exactly one of the two parameters halved relative to the
//! previous row: `co = log2(err_coarse / err_fine)`. Setup work shared by a
//! block of rows (basis construction, the reference run) is charged to the
//! first row of the block in the `setup_s` column.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::assembly::Discretization;
use crate::basis::SpectralBasis;
use crate::error::{Error, Result};
use crate::harness::norms::{ExactErrorTracker, ReferenceErrorTracker, ReferenceTrajectory};
use crate::harness::snapshot::FieldSnapshot;
use crate::mesh::build_structured_mesh;
use crate::model::GrayScottProblem;
use crate::stepper::{ImexSolver, StepperConfig, TimeGrid};

/// Default resolution of emitted field snapshots.
pub const SNAPSHOT_RESOLUTION: usize = 64;

/// Observed order between two errors under a halved parameter:
/// `log2(err_coarse / err_fine)`. Absent when either error is not positive.
pub fn convergence_order(err_coarse: f64, err_fine: f64) -> Option<f64> {
    if err_coarse > 0.0 && err_fine > 0.0 {
        Some((err_coarse / err_fine).log2())
    } else {
        None
    }
}

/// A fully specified convergence sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Benchmark problem id (1, 2 or 3).
    pub example: u32,
    /// Spectral order parameter; the element degree is `q + 1`.
    pub q: usize,
    /// Grid exponents: cell size `2^-l` per entry.
    pub h_exponents: Vec<u32>,
    /// Time step exponents: `sigma = 2^-l` per entry.
    pub sigma_exponents: Vec<u32>,
    /// Optional horizon override.
    pub t_final: Option<f64>,
    /// Reference step exponent for self-convergence (example 3 only).
    pub ref_sigma_exponent: Option<u32>,
    pub out_dir: PathBuf,
    pub snapshot_times: Vec<f64>,
    pub fp_tol: f64,
    pub fp_max_iter: usize,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            example: 0,
            q: 2,
            h_exponents: vec![2, 3, 4],
            sigma_exponents: vec![3, 4, 5, 6, 7],
            t_final: None,
            ref_sigma_exponent: None,
            out_dir: PathBuf::from("out"),
            snapshot_times: Vec::new(),
            fp_tol: 1e-12,
            fp_max_iter: 100,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.example) {
            return Err(Error::Config(format!(
                "example must be 1, 2 or 3 (got {})",
                self.example
            )));
        }
        if self.q < 2 {
            return Err(Error::Config(format!(
                "spectral order q must be at least 2 (got {})",
                self.q
            )));
        }
        if self.h_exponents.is_empty() || self.sigma_exponents.is_empty() {
            return Err(Error::Config(
                "h and sigma exponent lists must be non-empty".into(),
            ));
        }
        if !(self.fp_tol > 0.0) {
            return Err(Error::Config(format!(
                "fp-tol must be positive (got {})",
                self.fp_tol
            )));
        }
        if self.fp_max_iter == 0 {
            return Err(Error::Config("fp-max-iter must be at least 1".into()));
        }
        match (self.example, self.ref_sigma_exponent) {
            (3, None) => {
                return Err(Error::Config(
                    "example 3 has no exact solution; --ref-sigma-exp is required".into(),
                ))
            }
            (3, Some(r)) => {
                if let Some(&max_sigma) = self.sigma_exponents.iter().max() {
                    if r <= max_sigma {
                        return Err(Error::Config(format!(
                            "reference exponent {r} must exceed every sigma exponent \
                             (largest is {max_sigma})"
                        )));
                    }
                }
            }
            (_, Some(_)) => {
                return Err(Error::Config(
                    "--ref-sigma-exp only applies to example 3".into(),
                ))
            }
            _ => {}
        }
        if let Some(t) = self.t_final {
            if !(t > 0.0) {
                return Err(Error::Config(format!("t-final must be positive (got {t})")));
            }
        }
        Ok(())
    }

    pub fn element_degree(&self) -> usize {
        self.q + 1
    }
}

/// One successful sweep row.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRecord {
    pub h: f64,
    pub sigma: f64,
    pub norm_u_exact: f64,
    pub norm_u_num: f64,
    pub err_u: f64,
    pub co_u: Option<f64>,
    pub norm_v_exact: f64,
    pub norm_v_num: f64,
    pub err_v: f64,
    pub co_v: Option<f64>,
    pub setup_seconds: f64,
    pub solve_seconds: f64,
}

/// A sweep row; solver blow-up marks the row failed without aborting the
/// sweep.
#[derive(Clone, Debug)]
pub enum TableRow {
    Converged(ErrorRecord),
    Failed { h: f64, sigma: f64, reason: String },
}

impl TableRow {
    pub fn record(&self) -> Option<&ErrorRecord> {
        match self {
            TableRow::Converged(r) => Some(r),
            TableRow::Failed { .. } => None,
        }
    }

    fn h_sigma(&self) -> (f64, f64) {
        match self {
            TableRow::Converged(r) => (r.h, r.sigma),
            TableRow::Failed { h, sigma, .. } => (*h, *sigma),
        }
    }
}

/// Collected sweep results in row order.
#[derive(Clone, Debug)]
pub struct ConvergenceTable {
    pub example: u32,
    pub q: usize,
    pub rows: Vec<TableRow>,
}

pub const CSV_HEADER: &str = "example,q,h,sigma,norm_u_exact,norm_u_num,err_u,co_u,\
norm_v_exact,norm_v_num,err_v,co_v,setup_s,solve_s";

impl ConvergenceTable {
    pub fn records(&self) -> impl Iterator<Item = &ErrorRecord> {
        self.rows.iter().filter_map(|r| r.record())
    }

    pub fn all_rows_failed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.record().is_none())
    }

    /// Fills the `co_u` / `co_v` cells: a row gets an order when the
    /// previous row halves exactly one of (h, sigma) into it.
    pub fn compute_orders(&mut self) {
        for i in 1..self.rows.len() {
            let (prev_rec, cur_rec) = match (self.rows[i - 1].record(), self.rows[i].record()) {
                (Some(p), Some(c)) => (p.clone(), c.clone()),
                _ => continue,
            };
            let halved_h = relatively_equal(prev_rec.h, 2.0 * cur_rec.h)
                && relatively_equal(prev_rec.sigma, cur_rec.sigma);
            let halved_sigma = relatively_equal(prev_rec.sigma, 2.0 * cur_rec.sigma)
                && relatively_equal(prev_rec.h, cur_rec.h);
            if halved_h == halved_sigma {
                continue; // neither, or ambiguous
            }
            if let TableRow::Converged(cur) = &mut self.rows[i] {
                cur.co_u = convergence_order(prev_rec.err_u, cur_rec.err_u);
                cur.co_v = convergence_order(prev_rec.err_v, cur_rec.err_v);
            }
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let (h, sigma) = row.h_sigma();
            match row.record() {
                Some(r) => {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                        self.example,
                        self.q,
                        format_float(h),
                        format_float(sigma),
                        format_float(r.norm_u_exact),
                        format_float(r.norm_u_num),
                        format_float(r.err_u),
                        r.co_u.map(format_float).unwrap_or_default(),
                        format_float(r.norm_v_exact),
                        format_float(r.norm_v_num),
                        format_float(r.err_v),
                        r.co_v.map(format_float).unwrap_or_default(),
                        format_float(r.setup_seconds),
                        format_float(r.solve_seconds),
                    ));
                }
                None => {
                    out.push_str(&format!(
                        "{},{},{},{},,,,,,,,,,\n",
                        self.example,
                        self.q,
                        format_float(h),
                        format_float(sigma),
                    ));
                }
            }
        }
        out
    }

    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        w.write_all(self.to_csv_string().as_bytes())
    }

    /// Parses a table previously produced by [`Self::to_csv_string`].
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty CSV".into()))?;
        if header != CSV_HEADER {
            return Err(Error::Config(format!("unexpected CSV header: {header}")));
        }
        let mut example = 0u32;
        let mut q = 0usize;
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 14 {
                return Err(Error::Config(format!(
                    "row {i}: expected 14 cells, found {}",
                    cells.len()
                )));
            }
            let num = |idx: usize| -> Result<f64> {
                cells[idx]
                    .parse()
                    .map_err(|e| Error::Config(format!("row {i} cell {idx}: {e}")))
            };
            let opt = |idx: usize| -> Result<Option<f64>> {
                if cells[idx].is_empty() {
                    Ok(None)
                } else {
                    num(idx).map(Some)
                }
            };
            example = num(0)? as u32;
            q = num(1)? as usize;
            let (h, sigma) = (num(2)?, num(3)?);
            if cells[4..].iter().all(|c| c.is_empty()) {
                rows.push(TableRow::Failed {
                    h,
                    sigma,
                    reason: String::new(),
                });
                continue;
            }
            rows.push(TableRow::Converged(ErrorRecord {
                h,
                sigma,
                norm_u_exact: num(4)?,
                norm_u_num: num(5)?,
                err_u: num(6)?,
                co_u: opt(7)?,
                norm_v_exact: num(8)?,
                norm_v_num: num(9)?,
                err_v: num(10)?,
                co_v: opt(11)?,
                setup_seconds: num(12)?,
                solve_seconds: num(13)?,
            }));
        }
        Ok(Self { example, q, rows })
    }
}

fn relatively_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-30)
}

/// Six significant digits; scientific notation for magnitudes below `1e-3`
/// (and above `1e6`, where fixed notation would overstate the precision).
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs();
    if !(1e-3..1e6).contains(&mag) {
        format!("{x:.5e}")
    } else {
        let digits_before = mag.log10().floor() as i32 + 1;
        let precision = (6 - digits_before).max(0) as usize;
        format!("{x:.precision$}")
    }
}

/// Runs the configured sweep: per grid exponent, builds the basis once
/// (and, for the self-convergence protocol, the shared reference run), then
/// solves every time-step row against it. Blow-ups mark their row failed
/// without stopping the sweep.
pub fn run_convergence_study(config: &RunConfig) -> Result<ConvergenceTable> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let base_problem = GrayScottProblem::by_name(&config.example.to_string())?;
    let problem = match config.t_final {
        Some(t) => base_problem.with_t_final(t),
        None => base_problem,
    };
    if config.ref_sigma_exponent.is_none() && !problem.has_exact_solution() {
        return Err(Error::Config(format!(
            "{} has no exact solution and no reference step was given",
            problem.name
        )));
    }
    if !config.snapshot_times.is_empty() {
        std::fs::create_dir_all(&config.out_dir)?;
    }

    let mut rows = Vec::new();
    for &lh in &config.h_exponents {
        let block = pool.install(|| run_h_block(config, &problem, lh))?;
        rows.extend(block);
    }
    let mut table = ConvergenceTable {
        example: config.example,
        q: config.q,
        rows,
    };
    table.compute_orders();
    Ok(table)
}

fn run_h_block(
    config: &RunConfig,
    problem: &GrayScottProblem,
    lh: u32,
) -> Result<Vec<TableRow>> {
    let setup_start = Instant::now();
    let cell_size = 0.5f64.powi(lh as i32);
    let width = problem.domain.width();
    if !relatively_equal(width, problem.domain.height()) {
        return Err(Error::Config(format!(
            "{}: domain is not square, grid exponents are ambiguous",
            problem.name
        )));
    }
    let cells = (width / cell_size).round();
    if cells < 1.0 || !relatively_equal(cells * cell_size, width) {
        return Err(Error::Config(format!(
            "cell size 2^-{lh} does not tile the domain width {width}"
        )));
    }
    let mesh = build_structured_mesh(problem.domain, cells as usize)?;
    let disc = Arc::new(Discretization::new(mesh, config.element_degree())?);
    let basis = SpectralBasis::compute(disc)?;

    let stepper_config = StepperConfig {
        fp_tol: config.fp_tol,
        fp_max_iter: config.fp_max_iter,
        ..Default::default()
    };

    // self-convergence protocol: one fine-step reference per grid, stored at
    // the time resolution of the coarsest alignment of the test rows
    let reference = match config.ref_sigma_exponent {
        Some(lr) => {
            let sigma_ref = 0.5f64.powi(lr as i32);
            let max_test_exp = *config.sigma_exponents.iter().max().unwrap();
            let stride = 1usize << (lr - max_test_exp);
            let grid = TimeGrid::from_step(problem.t_final, sigma_ref)?;
            let solver = ImexSolver::new(&basis, problem, grid, stepper_config)?;
            let mut trajectory = ReferenceTrajectory::new(sigma_ref, stride);
            solver.run(|step, _, u, v| trajectory.record(step, u, v))?;
            Some(trajectory)
        }
        None => None,
    };
    let setup_seconds = setup_start.elapsed().as_secs_f64();

    let mut rows: Vec<TableRow> = config
        .sigma_exponents
        .par_iter()
        .map(|&ls| run_sigma_row(config, problem, &basis, reference.as_ref(), stepper_config, lh, ls))
        .collect::<Result<Vec<_>>>()?;

    // charge the shared setup to the first row of the block
    if let Some(TableRow::Converged(first)) = rows.first_mut() {
        first.setup_seconds = setup_seconds;
    }
    Ok(rows)
}

fn run_sigma_row(
    config: &RunConfig,
    problem: &GrayScottProblem,
    basis: &SpectralBasis,
    reference: Option<&ReferenceTrajectory>,
    stepper_config: StepperConfig,
    lh: u32,
    ls: u32,
) -> Result<TableRow> {
    let cell_size = 0.5f64.powi(lh as i32);
    let sigma = 0.5f64.powi(ls as i32);
    let grid = TimeGrid::from_step(problem.t_final, sigma)?;
    let solver = ImexSolver::new(basis, problem, grid, stepper_config)?;

    // map requested snapshot times to their nearest whole steps
    let snapshot_steps: Vec<(usize, f64)> = config
        .snapshot_times
        .iter()
        .map(|&t| {
            let n = (t / sigma).round().clamp(0.0, grid.n_steps as f64) as usize;
            (n, t)
        })
        .collect();

    let solve_start = Instant::now();
    let outcome = match (problem.has_exact_solution(), reference) {
        (true, _) => {
            let exact_u = problem.exact_u.as_ref().unwrap();
            let exact_v = problem.exact_v.as_ref().unwrap();
            let mut tracker = ExactErrorTracker::new(basis, exact_u, exact_v);
            let mut snaps = Vec::new();
            let run = solver.run(|step, t, u, v| {
                tracker.record(t, u, v);
                if snapshot_steps.iter().any(|&(n, _)| n == step) {
                    snaps.push((step, t, u.clone(), v.clone()));
                }
            });
            run.map(|_| {
                (
                    tracker.max_norm_exact_u,
                    tracker.max_norm_num_u,
                    tracker.max_err_u,
                    tracker.max_norm_exact_v,
                    tracker.max_norm_num_v,
                    tracker.max_err_v,
                    snaps,
                )
            })
        }
        (false, Some(reference)) => {
            let mut tracker = ReferenceErrorTracker::new(reference);
            let mut snaps = Vec::new();
            let run = solver.run(|step, t, u, v| {
                tracker.record(t, u, v);
                if snapshot_steps.iter().any(|&(n, _)| n == step) {
                    snaps.push((step, t, u.clone(), v.clone()));
                }
            });
            match (run, tracker.failure) {
                (Ok(_), None) => Ok((
                    tracker.max_norm_ref_u,
                    tracker.max_norm_num_u,
                    tracker.max_err_u,
                    tracker.max_norm_ref_v,
                    tracker.max_norm_num_v,
                    tracker.max_err_v,
                    snaps,
                )),
                (Err(e), _) => Err(e),
                (_, Some(reason)) => Err(Error::Config(reason)),
            }
        }
        (false, None) => unreachable!("validated in run_convergence_study"),
    };

    match outcome {
        Ok((neu, nnu, eu, nev, nnv, ev, snaps)) => {
            let solve_seconds = solve_start.elapsed().as_secs_f64();
            for (step, _, u, v) in snaps {
                let snap = FieldSnapshot::sample(basis, &u, &v, u.time, SNAPSHOT_RESOLUTION)?;
                let path = config.out_dir.join(format!(
                    "snapshot_ex{}_q{}_h{}_s{}_n{}.txt",
                    config.example, config.q, lh, ls, step
                ));
                let file = std::fs::File::create(path)?;
                snap.write(std::io::BufWriter::new(file))?;
            }
            Ok(TableRow::Converged(ErrorRecord {
                h: cell_size,
                sigma,
                norm_u_exact: neu,
                norm_u_num: nnu,
                err_u: eu,
                co_u: None,
                norm_v_exact: nev,
                norm_v_num: nnv,
                err_v: ev,
                co_v: None,
                setup_seconds: 0.0,
                solve_seconds,
            }))
        }
        // blow-up surfaces either as a coefficient-magnitude trip, a stalled
        // fixed point, or a non-finite reaction value at a quadrature point
        Err(
            e @ (Error::BlowUp { .. }
            | Error::FixedPointStalled { .. }
            | Error::NonFiniteField { .. }),
        ) => Ok(TableRow::Failed {
            h: cell_size,
            sigma,
            reason: e.to_string(),
        }),
        Err(other) => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn observed_orders_match_published_ratios() {
        // spatial pair at fixed sigma and a self-convergence pair, both
        // reported to four decimals in the benchmark tables
        let co = convergence_order(6.1179e-4, 8.1838e-5).unwrap();
        assert!((co - 2.9022).abs() <= 5e-4, "co = {co}");
        let co = convergence_order(9.1221e-3, 3.2998e-3).unwrap();
        assert!((co - 1.4670).abs() <= 5e-4, "co = {co}");
        assert_relative_eq!(convergence_order(4.0, 1.0).unwrap(), 2.0);
        assert!(convergence_order(0.0, 1.0).is_none());
        assert!(convergence_order(1.0, 0.0).is_none());
        assert!(convergence_order(-1.0, 0.5).is_none());
    }

    proptest! {
        #[test]
        fn order_is_log_additive(
            a in 1e-12..1e3f64, b in 1e-12..1e3f64, c in 1e-12..1e3f64,
        ) {
            let ab = convergence_order(a, b).unwrap();
            let bc = convergence_order(b, c).unwrap();
            let ac = convergence_order(a, c).unwrap();
            prop_assert!((ab + bc - ac).abs() <= 1e-12 * (1.0 + ab.abs() + bc.abs()));
        }
    }

    #[test]
    fn float_formatting_rules() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(0.5316), "0.531600");
        assert_eq!(format_float(26.0938), "26.0938");
        assert_eq!(format_float(3.4681), "3.46810");
        assert_eq!(format_float(-0.25), "-0.250000");
        assert_eq!(format_float(8.1838e-5), "8.18380e-5");
        assert_eq!(format_float(6.1179e-4), "6.11790e-4");
        assert_eq!(format_float(1.0e-3), "0.00100000");
        assert_eq!(format_float(2.5e7), "2.50000e7");
    }

    fn sample_table() -> ConvergenceTable {
        let rec = |h: f64, sigma: f64, eu: f64, ev: f64| ErrorRecord {
            h,
            sigma,
            norm_u_exact: 0.5316,
            norm_u_num: 0.5314,
            err_u: eu,
            co_u: None,
            norm_v_exact: 1.0632,
            norm_v_num: 1.0631,
            err_v: ev,
            co_v: None,
            setup_seconds: 1.25,
            solve_seconds: 3.4681,
        };
        ConvergenceTable {
            example: 1,
            q: 3,
            rows: vec![
                TableRow::Converged(rec(0.125, 2.0_f64.powi(-8), 6.1179e-4, 3.2705e-4)),
                TableRow::Converged(rec(0.0625, 2.0_f64.powi(-8), 8.1838e-5, 4.0593e-5)),
                TableRow::Converged(rec(0.03125, 2.0_f64.powi(-8), 1.0322e-5, 5.3345e-6)),
            ],
        }
    }

    #[test]
    fn orders_attach_to_halving_rows() {
        let mut t = sample_table();
        t.compute_orders();
        let records: Vec<_> = t.records().collect();
        assert!(records[0].co_u.is_none());
        assert!((records[1].co_u.unwrap() - 2.9022).abs() <= 5e-4);
        assert!((records[1].co_v.unwrap() - 3.0102).abs() <= 5e-4);
        assert!((records[2].co_u.unwrap() - 2.9871).abs() <= 5e-4);
    }

    #[test]
    fn orders_skip_non_halving_and_failed_rows() {
        let mut t = sample_table();
        // break the chain with a failed row
        t.rows[1] = TableRow::Failed {
            h: 0.0625,
            sigma: 2.0_f64.powi(-8),
            reason: "blow-up".into(),
        };
        t.compute_orders();
        let records: Vec<_> = t.records().collect();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.co_u.is_none()));
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let mut t = sample_table();
        t.rows.push(TableRow::Failed {
            h: 0.015625,
            sigma: 2.0_f64.powi(-8),
            reason: "solver blow-up".into(),
        });
        t.compute_orders();
        let text = t.to_csv_string();
        let parsed = ConvergenceTable::parse_csv(&text).unwrap();
        assert_eq!(parsed.example, 1);
        assert_eq!(parsed.q, 3);
        assert_eq!(parsed.rows.len(), 4);
        // the re-emitted CSV is byte-identical
        assert_eq!(parsed.to_csv_string(), text);
        // and parsed values re-parse to themselves
        let reparsed = ConvergenceTable::parse_csv(&parsed.to_csv_string()).unwrap();
        for (a, b) in parsed.records().zip(reparsed.records()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn csv_has_the_documented_header() {
        let t = sample_table();
        let text = t.to_csv_string();
        assert!(text.starts_with(
            "example,q,h,sigma,norm_u_exact,norm_u_num,err_u,co_u,\
             norm_v_exact,norm_v_num,err_v,co_v,setup_s,solve_s\n"
        ));
        assert!(ConvergenceTable::parse_csv("bogus header\n1,2").is_err());
    }

    #[test]
    fn config_validation_rules() {
        let ok = RunConfig {
            example: 1,
            ..Default::default()
        };
        assert!(ok.validate().is_ok());

        let bad_q = RunConfig {
            example: 1,
            q: 1,
            ..Default::default()
        };
        assert!(bad_q.validate().is_err());

        let missing_ref = RunConfig {
            example: 3,
            ..Default::default()
        };
        assert!(missing_ref.validate().is_err());

        let coarse_ref = RunConfig {
            example: 3,
            sigma_exponents: vec![5, 6],
            ref_sigma_exponent: Some(6),
            ..Default::default()
        };
        assert!(coarse_ref.validate().is_err());

        let ref_on_exact = RunConfig {
            example: 1,
            ref_sigma_exponent: Some(9),
            ..Default::default()
        };
        assert!(ref_on_exact.validate().is_err());

        let fine_ref = RunConfig {
            example: 3,
            sigma_exponents: vec![5, 6],
            ref_sigma_exponent: Some(8),
            ..Default::default()
        };
        assert!(fine_ref.validate().is_ok());
    }

    #[test]
    fn tiny_study_end_to_end() {
        // coarse smoke run in a time-step-dominated regime: the slow
        // diffusion of example 2 keeps sigma * alpha * lambda_max / 4 tiny,
        // and at sigma = 1/4 the temporal error dwarfs the spatial floor
        let config = RunConfig {
            example: 2,
            q: 2,
            h_exponents: vec![2],
            sigma_exponents: vec![2, 3],
            t_final: Some(1.0),
            out_dir: std::env::temp_dir().join("gs_spectral_study_test"),
            ..Default::default()
        };
        let table = run_convergence_study(&config).unwrap();
        assert_eq!(table.rows.len(), 2);
        let records: Vec<_> = table.records().collect();
        assert_eq!(records.len(), 2);
        assert!(records[0].err_u > records[1].err_u, "errors must shrink");
        assert!(records[1].co_u.is_some());
        assert!(records[0].setup_seconds > 0.0);
        assert!(records.iter().all(|r| r.solve_seconds >= 0.0));
    }

    #[test]
    fn tiny_self_convergence_study() {
        // reference-trajectory protocol on the pattern benchmark, shrunk to
        // a 5-cell grid and a 0.5 horizon; the reference runs first at
        // 2^-5 and both test rows compare against its stored states
        let config = RunConfig {
            example: 3,
            q: 2,
            h_exponents: vec![1], // cell 0.5 tiles the 2.5-wide square
            sigma_exponents: vec![2, 3],
            ref_sigma_exponent: Some(5),
            t_final: Some(0.5),
            out_dir: std::env::temp_dir().join("gs_spectral_ref_study_test"),
            ..Default::default()
        };
        let table = run_convergence_study(&config).unwrap();
        let records: Vec<_> = table.records().collect();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.err_u > 0.0 && r.err_v > 0.0));
        assert!(records[0].err_u > records[1].err_u, "errors must shrink");
        assert!(records[1].co_u.is_some() && records[1].co_v.is_some());
        // the reference norms stand in for the exact-solution columns
        assert!(records[0].norm_u_exact > 0.0);
    }
}
