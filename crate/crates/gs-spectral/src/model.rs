//! Gray-Scott kinetics, problem parameterizations and benchmark problems.
//!
//! The system couples an activator `u` and an inhibitor `v`:
//!
//! ```text
//! u_t - alpha1 Lap u = beta0 (1 - u) - u v^2        =: F1
//! v_t - alpha2 Lap v = -(beta0 + k0) v + u v^2      =: F2
//! ```
//!
//! with homogeneous Neumann boundary conditions. The first two benchmark
//! problems prescribe smooth exact solutions and carry the matching
//! manufactured source terms (derived in closed form, not by numerical
//! differencing, so convergence studies see no extra error floor); the third
//! is the classic pattern-formation setup without a known solution.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::basis::PointReaction;
use crate::error::{Error, Result};
use crate::mesh::RectDomain;

/// Scalar field of space only.
pub type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Scalar field of space and time.
pub type SpaceTimeField = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Kinetic and diffusion parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrayScottParams {
    /// Diffusion coefficient of `u`.
    pub alpha1: f64,
    /// Diffusion coefficient of `v`.
    pub alpha2: f64,
    /// Feed rate of the reactant `u`.
    pub beta0: f64,
    /// Removal-rate increment; the removal rate of `v` is `beta0 + k0`.
    pub k0: f64,
}

impl GrayScottParams {
    pub fn new(alpha1: f64, alpha2: f64, beta0: f64, k0: f64) -> Result<Self> {
        if !(alpha1 > 0.0 && alpha2 > 0.0) {
            return Err(Error::Config(format!(
                "diffusion coefficients must be positive (alpha1 = {alpha1}, alpha2 = {alpha2})"
            )));
        }
        if !(beta0 > 0.0) {
            return Err(Error::Config(format!(
                "feed rate must be positive (beta0 = {beta0})"
            )));
        }
        if !(beta0 + k0 > 0.0) {
            return Err(Error::Config(format!(
                "removal rate must be positive (beta0 + k0 = {})",
                beta0 + k0
            )));
        }
        Ok(Self {
            alpha1,
            alpha2,
            beta0,
            k0,
        })
    }

    /// The kinetic terms `(F1, F2)` without any source contribution.
    pub fn reaction(&self, _t: f64, u: f64, v: f64) -> (f64, f64) {
        let uv2 = u * v * v;
        (
            self.beta0 * (1.0 - u) - uv2,
            -(self.beta0 + self.k0) * v + uv2,
        )
    }
}

/// A complete initial-boundary value problem on a rectangle.
#[derive(Clone)]
pub struct GrayScottProblem {
    pub name: String,
    pub params: GrayScottParams,
    pub domain: RectDomain,
    pub t_final: f64,
    pub initial_u0: ScalarField,
    pub initial_v0: ScalarField,
    /// Prescribed initial time derivative of `u`; only enters the half-step
    /// start of the integrator.
    pub initial_u1: ScalarField,
    pub initial_v1: ScalarField,
    pub source_f1: Option<SpaceTimeField>,
    pub source_f2: Option<SpaceTimeField>,
    pub exact_u: Option<SpaceTimeField>,
    pub exact_v: Option<SpaceTimeField>,
}

impl std::fmt::Debug for GrayScottProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GrayScottProblem")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("domain", &self.domain)
            .field("t_final", &self.t_final)
            .field("has_sources", &self.source_f1.is_some())
            .field("has_exact", &self.exact_u.is_some())
            .finish()
    }
}

impl PointReaction for GrayScottProblem {
    fn eval(&self, x: f64, y: f64, t: f64, u: f64, v: f64) -> (f64, f64) {
        let (mut f1, mut f2) = self.params.reaction(t, u, v);
        if let Some(s) = &self.source_f1 {
            f1 += s(x, y, t);
        }
        if let Some(s) = &self.source_f2 {
            f2 += s(x, y, t);
        }
        (f1, f2)
    }
}

impl GrayScottProblem {
    /// Benchmark with exact solution `u = cos(pi x) cos(pi y) sin t`,
    /// `v = 2 u` on `[-1, 1]^2` with unit diffusion and feed rate.
    ///
    /// That pair does not solve the homogeneous system, so the matching
    /// source terms are attached (closed-form, from differentiating the
    /// exact fields); the convergence tables measure the distance to it.
    pub fn example1() -> Self {
        let params = GrayScottParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let spatial = |x: f64, y: f64| (PI * x).cos() * (PI * y).cos();
        let exact_u: SpaceTimeField = Arc::new(move |x, y, t| spatial(x, y) * t.sin());
        let exact_v: SpaceTimeField = Arc::new(move |x, y, t| 2.0 * spatial(x, y) * t.sin());

        // u_t - Lap u - F1 and v_t - Lap v - F2 for the fields above:
        //   u_t = C cos t,      Lap u = -2 pi^2 C sin t,
        //   v_t = 2 C cos t,    Lap v = -4 pi^2 C sin t,  C = cos(pi x) cos(pi y)
        let f1: SpaceTimeField = Arc::new(move |x, y, t| {
            let c = spatial(x, y);
            let s = t.sin();
            let u = c * s;
            c * t.cos() + 2.0 * PI * PI * u - (1.0 - u) + 4.0 * u * u * u
        });
        let f2: SpaceTimeField = Arc::new(move |x, y, t| {
            let c = spatial(x, y);
            let s = t.sin();
            let u = c * s;
            2.0 * c * t.cos() + 4.0 * PI * PI * u + 2.0 * u - 4.0 * u * u * u
        });

        Self {
            name: "example1".into(),
            params,
            domain: RectDomain::square(-1.0, 1.0).unwrap(),
            t_final: 1.0,
            initial_u0: Arc::new(|_, _| 0.0),
            initial_v0: Arc::new(|_, _| 0.0),
            initial_u1: Arc::new(spatial),
            initial_v1: Arc::new(move |x, y| 2.0 * spatial(x, y)),
            source_f1: Some(f1),
            source_f2: Some(f2),
            exact_u: Some(exact_u),
            exact_v: Some(exact_v),
        }
    }

    /// Manufactured-solution benchmark on the unit square with the realistic
    /// parameter set `alpha1 = 1.6e-5`, `alpha2 = 8e-6`, `beta0 = 0.037`,
    /// `k0 = 0.06`. Exact fields
    /// `u = 1 - (1/2) cos(2 pi x) cos(2 pi y) sin(2 pi t)` and
    /// `v = (1/4) (1 + cos(2 pi x) cos(2 pi y) sin(2 pi t))`, sources derived
    /// in closed form.
    pub fn example2() -> Self {
        let params = GrayScottParams::new(1.6e-5, 8e-6, 3.7e-2, 6e-2).unwrap();
        let b = 0.5;
        let spatial = |x: f64, y: f64| (2.0 * PI * x).cos() * (2.0 * PI * y).cos();
        let exact_u: SpaceTimeField =
            Arc::new(move |x, y, t| 1.0 - b * spatial(x, y) * (2.0 * PI * t).sin());
        let exact_v: SpaceTimeField =
            Arc::new(move |x, y, t| 0.25 * (1.0 + spatial(x, y) * (2.0 * PI * t).sin()));

        // u_t = -2 pi b C cos(2 pi t),   Lap u =  8 pi^2 b C sin(2 pi t),
        // v_t = (pi / 2) C cos(2 pi t),  Lap v = -2 pi^2 C sin(2 pi t)
        let (beta0, k0, alpha1, alpha2) = (params.beta0, params.k0, params.alpha1, params.alpha2);
        let f1: SpaceTimeField = Arc::new(move |x, y, t| {
            let c = spatial(x, y);
            let s = (2.0 * PI * t).sin();
            let u = 1.0 - b * c * s;
            let v = 0.25 * (1.0 + c * s);
            let ut = -2.0 * PI * b * c * (2.0 * PI * t).cos();
            let lap_u = 8.0 * PI * PI * b * c * s;
            ut - alpha1 * lap_u - beta0 * (1.0 - u) + u * v * v
        });
        let f2: SpaceTimeField = Arc::new(move |x, y, t| {
            let c = spatial(x, y);
            let s = (2.0 * PI * t).sin();
            let u = 1.0 - b * c * s;
            let v = 0.25 * (1.0 + c * s);
            let vt = 0.5 * PI * c * (2.0 * PI * t).cos();
            let lap_v = -2.0 * PI * PI * c * s;
            vt - alpha2 * lap_v + (beta0 + k0) * v - u * v * v
        });

        Self {
            name: "example2".into(),
            params,
            domain: RectDomain::unit_square(),
            t_final: 10.0,
            initial_u0: Arc::new(|_, _| 1.0),
            initial_v0: Arc::new(|_, _| 0.25),
            initial_u1: Arc::new(move |x, y| -2.0 * PI * b * spatial(x, y)),
            initial_v1: Arc::new(move |x, y| 0.5 * PI * spatial(x, y)),
            source_f1: Some(f1),
            source_f2: Some(f2),
            exact_u: Some(exact_u),
            exact_v: Some(exact_v),
        }
    }

    /// Pattern-formation benchmark on `[0, 2.5]^2`: a localized inhibitor
    /// bump inside `[1, 1.5]^2`, `alpha1 = 8e-5`, `alpha2 = 4e-5`,
    /// `beta0 = 0.03`, `k0 = 0.06`. No exact solution; convergence is
    /// measured against a fine-step reference run. The prescribed initial
    /// rates `u_t(., 0) = u(., 0)` and `v_t(., 0) = v(., 0)` are taken
    /// verbatim from the problem statement.
    pub fn example3() -> Self {
        let params = GrayScottParams::new(8e-5, 4e-5, 3e-2, 6e-2).unwrap();
        let v0 = |x: f64, y: f64| {
            if (1.0..=1.5).contains(&x) && (1.0..=1.5).contains(&y) {
                let sx = (4.0 * PI * x).sin();
                let sy = (4.0 * PI * y).sin();
                0.25 * sx * sx * sy * sy
            } else {
                0.0
            }
        };
        let u0 = move |x: f64, y: f64| 1.0 - 2.0 * v0(x, y);

        Self {
            name: "example3".into(),
            params,
            domain: RectDomain::square(0.0, 2.5).unwrap(),
            t_final: 1000.0,
            initial_u0: Arc::new(u0),
            initial_v0: Arc::new(v0),
            initial_u1: Arc::new(u0),
            initial_v1: Arc::new(v0),
            source_f1: None,
            source_f2: None,
            exact_u: None,
            exact_v: None,
        }
    }

    /// Looks a benchmark problem up by name (`example1` | `example2` |
    /// `example3`) or by its numeral.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "example1" | "1" => Ok(Self::example1()),
            "example2" | "2" => Ok(Self::example2()),
            "example3" | "3" => Ok(Self::example3()),
            other => Err(Error::Config(format!(
                "unknown problem `{other}` (expected example1, example2 or example3)"
            ))),
        }
    }

    /// Overrides the time horizon.
    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.t_final = t_final;
        self
    }

    pub fn has_exact_solution(&self) -> bool {
        self.exact_u.is_some() && self.exact_v.is_some()
    }

    /// Residual of the exact fields in the modified equations at one point;
    /// zero (to roundoff) when the source terms match the exact solution.
    /// Time and space derivatives are taken by central differences, so the
    /// check is independent of the closed-form differentiation used to build
    /// the sources.
    pub fn manufactured_residual(&self, x: f64, y: f64, t: f64) -> Option<(f64, f64)> {
        let (eu, ev) = (self.exact_u.as_ref()?, self.exact_v.as_ref()?);
        let h = 1e-4;
        let d2 = |f: &SpaceTimeField, x: f64, y: f64, t: f64| {
            let fxx = (f(x + h, y, t) - 2.0 * f(x, y, t) + f(x - h, y, t)) / (h * h);
            let fyy = (f(x, y + h, t) - 2.0 * f(x, y, t) + f(x, y - h, t)) / (h * h);
            fxx + fyy
        };
        let dt = |f: &SpaceTimeField, x: f64, y: f64, t: f64| {
            (f(x, y, t + h) - f(x, y, t - h)) / (2.0 * h)
        };
        let (u, v) = (eu(x, y, t), ev(x, y, t));
        let (f1, f2) = self.eval(x, y, t, u, v);
        let r1 = dt(eu, x, y, t) - self.params.alpha1 * d2(eu, x, y, t) - f1;
        let r2 = dt(ev, x, y, t) - self.params.alpha2 * d2(ev, x, y, t) - f2;
        Some((r1, r2))
    }
}
