//! Two-stage explicit/implicit time integration in the eigenbasis.
//!
//! One step from `t_n` to `t_{n+1}` passes through the half point
//! `t_{n+1/2}`. With `k_j = sigma alpha lambda_j / 4` per species and mode,
//!
//! ```text
//! stage 1 (explicit):
//!   c_j^{n+1/2} = c_j^n - k_j (3 c_j^n - c_j^{n-1/2})
//!                 + (sigma/4) (3 G_j(t_n) - G_j(t_{n-1/2}))
//! stage 2 (implicit):
//!   (1 + k_j) c_j^{n+1} = (1 - k_j) c_j^{n+1/2}
//!                 + (sigma/4) (G_j(t_{n+1}) + G_j(t_{n+1/2}))
//! ```
//!
//! where `G_j(t) = (F(t, u_h, v_h), phi_j)` are the spectral components of
//! the reaction. The diffusion part is diagonal, so stage 2 only needs a
//! fixed-point iteration over the reaction coupling. The run starts from
//! projected initial data at `t_0` and `t_{1/2}` and applies stage 2 once to
//! reach `t_1` before entering the two-stage loop.

use nalgebra::DVector;

use crate::basis::{PointReaction, SpectralBasis, SpectralCoeffs};
use crate::error::{Error, Result};
use crate::model::GrayScottProblem;

/// Uniform partition of `[0, t_final]` into `n_steps` steps.
#[derive(Clone, Copy, Debug)]
pub struct TimeGrid {
    pub sigma: f64,
    pub n_steps: usize,
    pub t_final: f64,
}

impl TimeGrid {
    pub fn new(t_final: f64, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::Config("n_steps must be at least 1".into()));
        }
        if !t_final.is_finite() || t_final < 0.0 {
            return Err(Error::Config(format!("invalid final time {t_final}")));
        }
        Ok(Self {
            sigma: t_final / n_steps as f64,
            n_steps,
            t_final,
        })
    }

    /// Builds the grid from a step size that must divide the horizon.
    pub fn from_step(t_final: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::Config(format!("invalid time step {sigma}")));
        }
        let n = (t_final / sigma).round();
        if n < 1.0 || (n * sigma - t_final).abs() > 1e-9 * t_final.abs().max(1.0) {
            return Err(Error::Config(format!(
                "time step {sigma} does not divide the horizon {t_final}"
            )));
        }
        Ok(Self {
            sigma,
            n_steps: n as usize,
            t_final,
        })
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.sigma
    }
}

/// Solver knobs for the implicit stage and the blow-up guard.
#[derive(Clone, Copy, Debug)]
pub struct StepperConfig {
    /// Relative max-norm tolerance of the fixed-point iteration.
    pub fp_tol: f64,
    /// Sweep cap; exceeding it is an error, not a silent acceptance.
    pub fp_max_iter: usize,
    /// Coefficient magnitude treated as divergence.
    pub blowup_threshold: f64,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            fp_tol: 1e-12,
            fp_max_iter: 100,
            blowup_threshold: 1e8,
        }
    }
}

/// Coefficients of both species at the current whole step and the most
/// recent half step.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub u_whole: SpectralCoeffs,
    pub v_whole: SpectralCoeffs,
    pub u_half: SpectralCoeffs,
    pub v_half: SpectralCoeffs,
    /// Whole-step index of `(u_whole, v_whole)`.
    pub step: usize,
}

/// Per-step record emitted by [`ImexSolver::run`].
#[derive(Clone, Copy, Debug)]
pub struct StepDiagnostics {
    pub step: usize,
    pub time: f64,
    /// Fixed-point sweeps taken by the implicit stage.
    pub fp_iterations: usize,
    /// Largest coefficient magnitude over both species after the step.
    pub max_coeff: f64,
}

/// Trajectory summary: final state plus per-step diagnostics.
#[derive(Debug)]
pub struct RunSummary {
    pub final_state: SolverState,
    pub diagnostics: Vec<StepDiagnostics>,
    pub stage1_calls: usize,
    pub stage2_calls: usize,
}

impl RunSummary {
    pub fn max_fp_iterations(&self) -> usize {
        self.diagnostics
            .iter()
            .map(|d| d.fp_iterations)
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.diagnostics
            .iter()
            .map(|d| d.max_coeff)
            .fold(0.0, f64::max)
    }
}

struct Stage2Outcome {
    u_next: SpectralCoeffs,
    v_next: SpectralCoeffs,
    iterations: usize,
    /// `G(t_{n+1/2}, C^{n+1/2})`, reusable by the next step's stage 1.
    g_half: (DVector<f64>, DVector<f64>),
}

/// The two-stage integrator bound to a basis, a problem and a time grid.
pub struct ImexSolver<'a> {
    basis: &'a SpectralBasis,
    problem: &'a GrayScottProblem,
    reaction: &'a dyn PointReaction,
    grid: TimeGrid,
    config: StepperConfig,
}

impl<'a> ImexSolver<'a> {
    pub fn new(
        basis: &'a SpectralBasis,
        problem: &'a GrayScottProblem,
        grid: TimeGrid,
        config: StepperConfig,
    ) -> Result<Self> {
        if !(config.fp_tol > 0.0) {
            return Err(Error::Config(format!(
                "fixed-point tolerance must be positive, got {}",
                config.fp_tol
            )));
        }
        if config.fp_max_iter == 0 {
            return Err(Error::Config("fp_max_iter must be at least 1".into()));
        }
        Ok(Self {
            basis,
            problem,
            reaction: problem,
            grid,
            config,
        })
    }

    /// Replaces the reaction map, e.g. to run pure diffusion.
    pub fn with_reaction(mut self, reaction: &'a dyn PointReaction) -> Self {
        self.reaction = reaction;
        self
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn basis(&self) -> &SpectralBasis {
        self.basis
    }

    /// Projects the initial data: whole-step state at `t_0`, half-step state
    /// `w_0 + (sigma/2) w_1` at `t_{1/2}`.
    pub fn initialize(&self) -> Result<SolverState> {
        let p = self.problem;
        let s2 = 0.5 * self.grid.sigma;
        let u_whole = self.basis.project_l2(&*p.initial_u0, 0.0)?;
        let v_whole = self.basis.project_l2(&*p.initial_v0, 0.0)?;
        let (u0, u1) = (p.initial_u0.clone(), p.initial_u1.clone());
        let u_half = self
            .basis
            .project_l2(&move |x, y| u0(x, y) + s2 * u1(x, y), s2)?;
        let (v0, v1) = (p.initial_v0.clone(), p.initial_v1.clone());
        let v_half = self
            .basis
            .project_l2(&move |x, y| v0(x, y) + s2 * v1(x, y), s2)?;
        Ok(SolverState {
            u_whole,
            v_whole,
            u_half,
            v_half,
            step: 0,
        })
    }

    fn functional(
        &self,
        t: f64,
        u: &SpectralCoeffs,
        v: &SpectralCoeffs,
    ) -> Result<(DVector<f64>, DVector<f64>)> {
        self.basis.nonlinear_functional(t, u, v, self.reaction)
    }

    /// Explicit predictor from `(t_n, t_{n-1/2})` to `t_{n+1/2}`. Evaluates
    /// both reaction functionals itself; the run loop uses the cached
    /// variant instead.
    pub fn stage1_explicit(&self, state: &SolverState) -> Result<(SpectralCoeffs, SpectralCoeffs)> {
        if state.step < 1 {
            return Err(Error::Config(
                "stage 1 needs a completed bootstrap step (state.step >= 1)".into(),
            ));
        }
        let g_whole = self.functional(state.u_whole.time, &state.u_whole, &state.v_whole)?;
        let g_half = self.functional(state.u_half.time, &state.u_half, &state.v_half)?;
        let pair = self.stage1_with(state, &g_whole, &g_half);
        self.check_finite(state.step, pair.0.time, &pair.0.values, &pair.1.values)?;
        Ok(pair)
    }

    fn stage1_with(
        &self,
        state: &SolverState,
        g_whole: &(DVector<f64>, DVector<f64>),
        g_half: &(DVector<f64>, DVector<f64>),
    ) -> (SpectralCoeffs, SpectralCoeffs) {
        let sigma = self.grid.sigma;
        let lam = self.basis.eigenvalues();
        let (a1, a2) = (self.problem.params.alpha1, self.problem.params.alpha2);
        let t_next = state.u_whole.time + 0.5 * sigma;
        let n = self.basis.n_modes();
        let mut u = DVector::zeros(n);
        let mut v = DVector::zeros(n);
        for j in 0..n {
            let ku = 0.25 * sigma * a1 * lam[j];
            let kv = 0.25 * sigma * a2 * lam[j];
            u[j] = stage1_mode(
                state.u_whole.values[j],
                state.u_half.values[j],
                ku,
                sigma,
                g_whole.0[j],
                g_half.0[j],
            );
            v[j] = stage1_mode(
                state.v_whole.values[j],
                state.v_half.values[j],
                kv,
                sigma,
                g_whole.1[j],
                g_half.1[j],
            );
        }
        (
            SpectralCoeffs::new(u, t_next),
            SpectralCoeffs::new(v, t_next),
        )
    }

    /// Implicit corrector from `t_{n+1/2}` to `t_{n+1}`, solved by
    /// fixed-point iteration on the full coefficient pair with initial guess
    /// `C^{n+1/2}`; every sweep re-evaluates `G(t_{n+1}, .)` once and updates
    /// all modes through the diagonal left-hand side.
    pub fn stage2_implicit(
        &self,
        u_half: &SpectralCoeffs,
        v_half: &SpectralCoeffs,
    ) -> Result<(SpectralCoeffs, SpectralCoeffs, usize)> {
        let out = self.stage2_with(u_half, v_half)?;
        Ok((out.u_next, out.v_next, out.iterations))
    }

    fn stage2_with(
        &self,
        u_half: &SpectralCoeffs,
        v_half: &SpectralCoeffs,
    ) -> Result<Stage2Outcome> {
        let sigma = self.grid.sigma;
        let lam = self.basis.eigenvalues();
        let (a1, a2) = (self.problem.params.alpha1, self.problem.params.alpha2);
        let t_half = u_half.time;
        let t_next = t_half + 0.5 * sigma;
        let n = self.basis.n_modes();

        let g_half = self.functional(t_half, u_half, v_half)?;

        let mut u = SpectralCoeffs::new(u_half.values.clone(), t_next);
        let mut v = SpectralCoeffs::new(v_half.values.clone(), t_next);
        let mut iterations = 0;
        let mut residual = f64::INFINITY;
        for sweep in 1..=self.config.fp_max_iter {
            iterations = sweep;
            let g_next = self.functional(t_next, &u, &v)?;
            let mut delta = 0.0_f64;
            let mut scale = 0.0_f64;
            for j in 0..n {
                let ku = 0.25 * sigma * a1 * lam[j];
                let kv = 0.25 * sigma * a2 * lam[j];
                let nu = stage2_mode(u_half.values[j], ku, sigma, g_next.0[j], g_half.0[j]);
                let nv = stage2_mode(v_half.values[j], kv, sigma, g_next.1[j], g_half.1[j]);
                delta = delta.max((nu - u.values[j]).abs());
                delta = delta.max((nv - v.values[j]).abs());
                scale = scale.max(nu.abs()).max(nv.abs());
                u.values[j] = nu;
                v.values[j] = nv;
            }
            residual = if delta == 0.0 { 0.0 } else { delta / scale.max(f64::MIN_POSITIVE) };
            if residual <= self.config.fp_tol {
                return Ok(Stage2Outcome {
                    u_next: u,
                    v_next: v,
                    iterations,
                    g_half,
                });
            }
        }
        Err(Error::FixedPointStalled {
            iterations,
            time: t_next,
            residual,
            tolerance: self.config.fp_tol,
        })
    }

    fn check_finite(&self, step: usize, time: f64, u: &DVector<f64>, v: &DVector<f64>) -> Result<()> {
        for (name, vec) in [("u", u), ("v", v)] {
            for (j, &c) in vec.iter().enumerate() {
                if !c.is_finite() || c.abs() > self.config.blowup_threshold {
                    return Err(Error::BlowUp {
                        step,
                        time,
                        detail: format!("{name} coefficient {j} is {c:.3e}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Integrates over the whole grid. `observer` is invoked with read-only
    /// whole-step states at `t_0, t_1, ..., t_N`.
    pub fn run(
        &self,
        mut observer: impl FnMut(usize, f64, &SpectralCoeffs, &SpectralCoeffs),
    ) -> Result<RunSummary> {
        let mut state = self.initialize()?;
        self.check_finite(0, 0.0, &state.u_whole.values, &state.v_whole.values)?;
        self.check_finite(0, state.u_half.time, &state.u_half.values, &state.v_half.values)?;
        observer(0, 0.0, &state.u_whole, &state.v_whole);

        let mut diagnostics = Vec::with_capacity(self.grid.n_steps);
        let mut stage1_calls = 0usize;
        let mut stage2_calls = 0usize;

        // bootstrap: one implicit correction from (t_0, t_{1/2}) to t_1
        let out = self.stage2_with(&state.u_half, &state.v_half)?;
        stage2_calls += 1;
        state.u_whole = out.u_next;
        state.v_whole = out.v_next;
        state.step = 1;
        self.check_finite(1, state.u_whole.time, &state.u_whole.values, &state.v_whole.values)?;
        let max_coeff = state.u_whole.values.amax().max(state.v_whole.values.amax());
        diagnostics.push(StepDiagnostics {
            step: 1,
            time: state.u_whole.time,
            fp_iterations: out.iterations,
            max_coeff,
        });
        observer(1, state.u_whole.time, &state.u_whole, &state.v_whole);
        let mut g_half_cache = out.g_half;

        for n in 1..self.grid.n_steps {
            let t_n = self.grid.time(n);
            let g_whole = self.functional(t_n, &state.u_whole, &state.v_whole)?;
            let (u_half, v_half) = self.stage1_with(&state, &g_whole, &g_half_cache);
            stage1_calls += 1;
            self.check_finite(n, u_half.time, &u_half.values, &v_half.values)?;

            let out = self.stage2_with(&u_half, &v_half)?;
            stage2_calls += 1;
            state.u_half = u_half;
            state.v_half = v_half;
            state.u_whole = out.u_next;
            state.v_whole = out.v_next;
            state.step = n + 1;
            g_half_cache = out.g_half;

            self.check_finite(
                n + 1,
                state.u_whole.time,
                &state.u_whole.values,
                &state.v_whole.values,
            )?;
            let max_coeff = state.u_whole.values.amax().max(state.v_whole.values.amax());
            diagnostics.push(StepDiagnostics {
                step: n + 1,
                time: state.u_whole.time,
                fp_iterations: out.iterations,
                max_coeff,
            });
            observer(n + 1, state.u_whole.time, &state.u_whole, &state.v_whole);
        }

        Ok(RunSummary {
            final_state: state,
            diagnostics,
            stage1_calls,
            stage2_calls,
        })
    }
}

#[inline]
fn stage1_mode(c_whole: f64, c_prev_half: f64, k: f64, sigma: f64, g_new: f64, g_old: f64) -> f64 {
    c_whole - k * (3.0 * c_whole - c_prev_half) + 0.25 * sigma * (3.0 * g_new - g_old)
}

#[inline]
fn stage2_mode(c_half: f64, k: f64, sigma: f64, g_next: f64, g_half: f64) -> f64 {
    ((1.0 - k) * c_half + 0.25 * sigma * (g_next + g_half)) / (1.0 + k)
}
