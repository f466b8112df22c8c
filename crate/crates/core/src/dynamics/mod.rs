//! Friedrichs-truncated damped Navier-Stokes dynamics in coefficient space.
//!
//! The evolved system is
//!
//! ```text
//! du/dt = nu Lap u - P J div(u (x) u) - alpha P J (|u|^(beta-1) u) + F
//! ```
//!
//! with `J` the sharp cutoff at the grid radius and `P` the Leray projector.
//! The pressure never enters the evolution; [`pressure_field`] recovers it.

mod forcing;
mod nonlinear;
mod stepper;

pub use forcing::{manufactured_forcing, Forcing, ManufacturedForcing, ManufacturedTarget};
pub use nonlinear::{
    advection, damping, nonlinear_terms, pressure_field, tendency, Nonlinear, StageEval, Tendency,
};
pub use stepper::{run, step, step_forced, Hook, Integrator, RunOptions};

use crate::field::SpectralField;
use crate::ledger::DuhamelSplit;
use crate::params::PhysParams;
use crate::spectral::{friedrichs_truncate, leray_project};
use crate::{Complex64, Error, GridSpec, Result};

/// Guard against a vanishing stability denominator on the zero field.
pub const CFL_FLOOR: f64 = 1e-30;

/// Relative tolerance used when validating a state's invariants.
pub const STATE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Lawson integrating-factor RK4: viscosity exact, nonlinear terms explicit.
    IntegratingFactorRk4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    /// Fraction in (0, 1] of the advective/damping stability limit.
    pub safety: f64,
}

impl StepperConfig {
    pub fn new(dt: f64) -> Result<Self> {
        Self::with_safety(dt, 0.5)
    }

    pub fn with_safety(dt: f64, safety: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {dt}"
            )));
        }
        if !(safety > 0.0 && safety <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "safety must lie in (0, 1], got {safety}"
            )));
        }
        Ok(StepperConfig {
            dt,
            scheme: Scheme::IntegratingFactorRk4,
            safety,
        })
    }

    /// `safety / max(|u|_inf xi_max, alpha |u|_inf^(beta-1), floor)`.
    pub fn stability_limit(&self, linf: f64, xi_max: f64, params: &PhysParams) -> f64 {
        let advective = linf * xi_max;
        let damping = if params.alpha > 0.0 {
            params.alpha * linf.powf(params.beta - 1.0)
        } else {
            0.0
        };
        self.safety / advective.max(damping).max(CFL_FLOOR)
    }
}

/// Time integrals of the two dissipation channels, accumulated with the
/// stage weights of the time scheme.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DissipationBudget {
    /// `2 nu int ||grad u||^2 dt`.
    pub viscous: f64,
    /// `2 alpha int ||u||_{L^(beta+1)}^(beta+1) dt`.
    pub damping: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub u: SpectralField,
    pub params: PhysParams,
    pub step_count: u64,
    pub budget: DissipationBudget,
    /// Incremental Duhamel decomposition, when tracked.
    pub duhamel: Option<DuhamelSplit>,
}

impl SolverState {
    /// Validates `u` (Hermitian, truncated, zero mean, solenoidal) and starts at `t = 0`.
    pub fn new(u: SpectralField, params: PhysParams) -> Result<Self> {
        Self::at_time(u, params, 0.0)
    }

    pub fn at_time(mut u: SpectralField, params: PhysParams, t: f64) -> Result<Self> {
        if !u.is_solenoidal() {
            if u.divergence_relative() > STATE_TOLERANCE {
                return Err(Error::Invariant(
                    "initial field is not divergence free".into(),
                ));
            }
            u.mark_solenoidal(true);
        }
        u.check_invariants(STATE_TOLERANCE)?;
        Ok(SolverState {
            t,
            u,
            params,
            step_count: 0,
            budget: DissipationBudget::default(),
            duhamel: None,
        })
    }

    /// Starts tracking the Duhamel split with the current field as heat datum.
    pub fn with_duhamel(mut self) -> Self {
        self.duhamel = Some(DuhamelSplit::new(&self.u));
        self
    }

    pub fn grid(&self) -> &GridSpec {
        self.u.grid()
    }
}

/// Brings an arbitrary field into the evolved space: zero mean, cut off at the
/// grid radius, Leray-projected.
pub fn conform(field: &SpectralField) -> Result<SpectralField> {
    let mut f = field.clone();
    for c in 0..3 {
        f.component_mut(c)[0] = Complex64::new(0.0, 0.0);
    }
    let f = friedrichs_truncate(&f, field.grid().cutoff_radius())?;
    Ok(leray_project(&f))
}
