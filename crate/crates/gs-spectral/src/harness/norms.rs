//! Norms and max-in-time error trackers.
//!
//! All errors are measured in the discrete `L^inf(0, T; L^2)` sense: the
//! maximum over whole steps of the spatial L2 norm. Against an analytic
//! solution the difference is integrated element-wise with the exact field
//! evaluated at the quadrature points; against a reference trajectory both
//! states live in the same basis, so the error is the Euclidean distance of
//! the coefficient vectors.

use nalgebra::DVector;

use crate::assembly::Discretization;
use crate::basis::{SpectralBasis, SpectralCoeffs};
use crate::error::{Error, Result};
use crate::model::SpaceTimeField;

/// L2 norm of a spectral representation; by M-orthonormality of the basis
/// this is the Euclidean norm of the coefficient vector.
pub fn l2_norm_coeffs(coeffs: &SpectralCoeffs) -> f64 {
    coeffs.values.norm()
}

/// L2 norm of an analytic field, by element quadrature.
pub fn l2_norm_field(disc: &Discretization, f: &dyn Fn(f64, f64) -> f64) -> f64 {
    disc.integrate(&|x, y| {
        let v = f(x, y);
        v * v
    })
    .max(0.0)
    .sqrt()
}

/// Running maxima of per-step L2 errors and norms against an exact solution.
pub struct ExactErrorTracker<'a> {
    basis: &'a SpectralBasis,
    exact_u: &'a SpaceTimeField,
    exact_v: &'a SpaceTimeField,
    pub max_err_u: f64,
    pub max_err_v: f64,
    pub max_norm_exact_u: f64,
    pub max_norm_exact_v: f64,
    pub max_norm_num_u: f64,
    pub max_norm_num_v: f64,
    pub steps_seen: usize,
}

impl<'a> ExactErrorTracker<'a> {
    pub fn new(
        basis: &'a SpectralBasis,
        exact_u: &'a SpaceTimeField,
        exact_v: &'a SpaceTimeField,
    ) -> Self {
        Self {
            basis,
            exact_u,
            exact_v,
            max_err_u: 0.0,
            max_err_v: 0.0,
            max_norm_exact_u: 0.0,
            max_norm_exact_v: 0.0,
            max_norm_num_u: 0.0,
            max_norm_num_v: 0.0,
            steps_seen: 0,
        }
    }

    /// Folds one whole-step state into the maxima.
    pub fn record(&mut self, t: f64, u: &SpectralCoeffs, v: &SpectralCoeffs) {
        let disc = self.basis.discretization();
        let nodal_u = self.basis.to_nodal(u).expect("state matches basis");
        let nodal_v = self.basis.to_nodal(v).expect("state matches basis");
        let (eu, nu) = disc.l2_error_and_norm(&nodal_u, &|x, y| (self.exact_u)(x, y, t));
        let (ev, nv) = disc.l2_error_and_norm(&nodal_v, &|x, y| (self.exact_v)(x, y, t));
        self.max_err_u = self.max_err_u.max(eu);
        self.max_err_v = self.max_err_v.max(ev);
        self.max_norm_exact_u = self.max_norm_exact_u.max(nu);
        self.max_norm_exact_v = self.max_norm_exact_v.max(nv);
        self.max_norm_num_u = self.max_norm_num_u.max(l2_norm_coeffs(u));
        self.max_norm_num_v = self.max_norm_num_v.max(l2_norm_coeffs(v));
        self.steps_seen += 1;
    }
}

/// Coefficient snapshots of a reference run, stored every `stride` whole
/// steps so coarser test runs can look their own step times up exactly.
#[derive(Debug)]
pub struct ReferenceTrajectory {
    pub sigma: f64,
    pub stride: usize,
    pub states: Vec<(DVector<f64>, DVector<f64>)>,
}

impl ReferenceTrajectory {
    pub fn new(sigma: f64, stride: usize) -> Self {
        assert!(stride >= 1);
        Self {
            sigma,
            stride,
            states: Vec::new(),
        }
    }

    /// Observer hook for the reference run.
    pub fn record(&mut self, step: usize, u: &SpectralCoeffs, v: &SpectralCoeffs) {
        if step.is_multiple_of(self.stride) {
            debug_assert_eq!(self.states.len(), step / self.stride);
            self.states.push((u.values.clone(), v.values.clone()));
        }
    }

    /// Time between stored snapshots.
    pub fn snapshot_dt(&self) -> f64 {
        self.sigma * self.stride as f64
    }

    /// Stored state at time `t`, which must align with a snapshot.
    pub fn state_at(&self, t: f64) -> Result<&(DVector<f64>, DVector<f64>)> {
        let dt = self.snapshot_dt();
        let idx = (t / dt).round();
        if (idx * dt - t).abs() > 1e-9 * dt.max(1.0) {
            return Err(Error::Config(format!(
                "time {t} does not align with the reference snapshots (dt = {dt})"
            )));
        }
        self.states.get(idx as usize).ok_or_else(|| {
            Error::Config(format!(
                "reference trajectory too short for time {t} (has {} snapshots)",
                self.states.len()
            ))
        })
    }
}

/// Running maxima of per-step errors against a stored reference trajectory.
pub struct ReferenceErrorTracker<'a> {
    reference: &'a ReferenceTrajectory,
    pub max_err_u: f64,
    pub max_err_v: f64,
    pub max_norm_ref_u: f64,
    pub max_norm_ref_v: f64,
    pub max_norm_num_u: f64,
    pub max_norm_num_v: f64,
    pub failure: Option<String>,
    pub steps_seen: usize,
}

impl<'a> ReferenceErrorTracker<'a> {
    pub fn new(reference: &'a ReferenceTrajectory) -> Self {
        Self {
            reference,
            max_err_u: 0.0,
            max_err_v: 0.0,
            max_norm_ref_u: 0.0,
            max_norm_ref_v: 0.0,
            max_norm_num_u: 0.0,
            max_norm_num_v: 0.0,
            failure: None,
            steps_seen: 0,
        }
    }

    pub fn record(&mut self, t: f64, u: &SpectralCoeffs, v: &SpectralCoeffs) {
        let (ref_u, ref_v) = match self.reference.state_at(t) {
            Ok(pair) => pair,
            Err(e) => {
                self.failure.get_or_insert(e.to_string());
                return;
            }
        };
        self.max_err_u = self.max_err_u.max((&u.values - ref_u).norm());
        self.max_err_v = self.max_err_v.max((&v.values - ref_v).norm());
        self.max_norm_ref_u = self.max_norm_ref_u.max(ref_u.norm());
        self.max_norm_ref_v = self.max_norm_ref_v.max(ref_v.norm());
        self.max_norm_num_u = self.max_norm_num_u.max(u.values.norm());
        self.max_norm_num_v = self.max_norm_num_v.max(v.values.norm());
        self.steps_seen += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::Discretization;
    use crate::mesh::{build_structured_mesh, RectDomain};
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn basis(domain: RectDomain, cells: usize, degree: usize) -> SpectralBasis {
        let mesh = build_structured_mesh(domain, cells).unwrap();
        let disc = Arc::new(Discretization::new(mesh, degree).unwrap());
        SpectralBasis::compute(disc).unwrap()
    }

    #[test]
    fn field_norm_of_constants() {
        let unit = basis(RectDomain::unit_square(), 2, 1);
        assert_relative_eq!(
            l2_norm_field(unit.discretization(), &|_, _| 1.0),
            1.0,
            max_relative = 1e-13
        );
        let wide = basis(RectDomain::square(-1.0, 1.0).unwrap(), 2, 1);
        assert_relative_eq!(
            l2_norm_field(wide.discretization(), &|_, _| 1.0),
            2.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn coeff_norm_of_unit_vector() {
        let b = basis(RectDomain::unit_square(), 2, 1);
        let mut c = SpectralCoeffs::zeros(b.n_modes(), 0.0);
        c.values[4] = 1.0;
        assert_eq!(l2_norm_coeffs(&c), 1.0);
    }

    #[test]
    fn exact_tracker_is_zero_on_matching_trajectory() {
        let b = basis(RectDomain::unit_square(), 2, 2);
        // numeric state = projection of the "exact" constant field
        let exact_u: SpaceTimeField = Arc::new(|_, _, _| 1.0);
        let exact_v: SpaceTimeField = Arc::new(|_, _, _| 0.25);
        let u = b.project_l2(&|_, _| 1.0, 0.0).unwrap();
        let v = b.project_l2(&|_, _| 0.25, 0.0).unwrap();
        let mut tracker = ExactErrorTracker::new(&b, &exact_u, &exact_v);
        tracker.record(0.0, &u, &v);
        tracker.record(0.5, &u, &v);
        assert!(tracker.max_err_u <= 1e-11 && tracker.max_err_v <= 1e-11);
        assert_relative_eq!(tracker.max_norm_exact_u, 1.0, max_relative = 1e-12);
        assert_relative_eq!(tracker.max_norm_num_v, 0.25, max_relative = 1e-9);
        assert_eq!(tracker.steps_seen, 2);
    }

    #[test]
    fn exact_tracker_single_step_known_error() {
        // state = projection of 1, exact = 1 + x: difference is the
        // projection error plus the linear trend; at degree 1 the projection
        // of 1 is exact so the error is |1 - (1 + x)| = |x| in L2 = 1/sqrt(3)
        let b = basis(RectDomain::unit_square(), 4, 1);
        let exact_u: SpaceTimeField = Arc::new(|x, _, _| 1.0 + x);
        let exact_v: SpaceTimeField = Arc::new(|_, _, _| 0.0);
        let u = b.project_l2(&|_, _| 1.0, 0.0).unwrap();
        let v = SpectralCoeffs::zeros(b.n_modes(), 0.0);
        let mut tracker = ExactErrorTracker::new(&b, &exact_u, &exact_v);
        tracker.record(0.0, &u, &v);
        assert_relative_eq!(
            tracker.max_err_u,
            (1.0f64 / 3.0).sqrt(),
            max_relative = 1e-12
        );
        assert_eq!(tracker.max_err_v, 0.0);
    }

    #[test]
    fn reference_tracker_zero_against_itself() {
        let b = basis(RectDomain::unit_square(), 2, 1);
        let n = b.n_modes();
        let mut reference = ReferenceTrajectory::new(0.25, 1);
        let states: Vec<SpectralCoeffs> = (0..5)
            .map(|i| {
                let mut c = SpectralCoeffs::zeros(n, i as f64 * 0.25);
                c.values[0] = i as f64;
                c
            })
            .collect();
        for (i, s) in states.iter().enumerate() {
            reference.record(i, s, s);
        }
        let mut tracker = ReferenceErrorTracker::new(&reference);
        for (i, s) in states.iter().enumerate() {
            tracker.record(i as f64 * 0.25, s, s);
        }
        assert_eq!(tracker.max_err_u, 0.0);
        assert_eq!(tracker.max_norm_ref_u, 4.0);
        assert!(tracker.failure.is_none());
    }

    #[test]
    fn reference_tracker_subsampling_and_misalignment() {
        let b = basis(RectDomain::unit_square(), 1, 1);
        let n = b.n_modes();
        // reference run at sigma = 0.125 storing every 2nd step (dt 0.25)
        let mut reference = ReferenceTrajectory::new(0.125, 2);
        for i in 0..9 {
            let mut c = SpectralCoeffs::zeros(n, i as f64 * 0.125);
            c.values[1] = i as f64;
            reference.record(i, &c, &c);
        }
        assert_eq!(reference.states.len(), 5);
        // test run at sigma = 0.5 hits stored snapshots 0, 2, 4
        let mut tracker = ReferenceErrorTracker::new(&reference);
        for step in 0..3 {
            let t = step as f64 * 0.5;
            let mut c = SpectralCoeffs::zeros(n, t);
            c.values[1] = (t / 0.125) + 1.0; // off by one from the reference
            tracker.record(t, &c, &c);
        }
        assert!((tracker.max_err_u - 1.0).abs() <= 1e-12);
        assert!(tracker.failure.is_none());

        // a time that falls between snapshots is a hard error
        let c = SpectralCoeffs::zeros(n, 0.3);
        tracker.record(0.3, &c, &c);
        assert!(tracker.failure.is_some());
    }
}
