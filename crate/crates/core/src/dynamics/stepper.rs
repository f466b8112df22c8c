//! Lawson integrating-factor RK4.
//!
//! With `E_h = exp(-nu |xi|^2 h)` and `k_i` the nonlinear (plus forcing)
//! tendency at the stage states,
//!
//! ```text
//! u_a = E_{h/2} (u_n + h/2 k_1)
//! u_b = E_{h/2} u_n + h/2 k_2
//! u_c = E_h u_n + h E_{h/2} k_3
//! u_{n+1} = E_h u_n + h/6 (E_h k_1 + 2 E_{h/2} (k_2 + k_3) + k_4)
//! ```
//!
//! Every stage state is cut off and projected again. The dissipation
//! integrals ride along as extra components with no linear part, and the
//! Duhamel channels reuse the same update with the tendency split by source.

use crate::field::SpectralField;
use crate::params::PhysParams;
use crate::spectral::{project_in_place, truncate_in_place};
use crate::{Error, GridSpec, Result};

use super::forcing::Forcing;
use super::nonlinear::{Nonlinear, StageEval};
use super::{SolverState, StepperConfig};

/// Called with read-only snapshots at the output cadence.
pub trait Hook {
    fn on_snapshot(&mut self, state: &SolverState) -> Result<()>;
}

impl<F: FnMut(&SolverState) -> Result<()>> Hook for F {
    fn on_snapshot(&mut self, state: &SolverState) -> Result<()> {
        self(state)
    }
}

/// Reusable stepping machinery for one grid, parameter set and step size.
pub struct Integrator<'a> {
    grid: GridSpec,
    params: PhysParams,
    cfg: StepperConfig,
    nonlinear: Nonlinear,
    full: Vec<f64>,
    half: Vec<f64>,
    forcing: Option<&'a dyn Forcing>,
}

impl<'a> Integrator<'a> {
    pub fn new(grid: &GridSpec, params: PhysParams, cfg: StepperConfig) -> Self {
        let nonlinear = Nonlinear::new(grid);
        let h = cfg.dt;
        let full = nonlinear
            .tables()
            .xi_sq
            .iter()
            .map(|k2| (-params.nu * k2 * h).exp())
            .collect();
        let half = nonlinear
            .tables()
            .xi_sq
            .iter()
            .map(|k2| (-params.nu * k2 * h * 0.5).exp())
            .collect();
        Integrator {
            grid: *grid,
            params,
            cfg,
            nonlinear,
            full,
            half,
            forcing: None,
        }
    }

    pub fn with_forcing(mut self, forcing: &'a dyn Forcing) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn config(&self) -> &StepperConfig {
        &self.cfg
    }

    fn conform(&self, f: &mut SpectralField) {
        truncate_in_place(f, &self.nonlinear.tables().inside);
        project_in_place(f, &self.nonlinear.tables().xi);
    }

    fn stage_tendency(&self, eval: &StageEval, t: f64) -> SpectralField {
        let mut k = &eval.advection * -1.0;
        k.axpy(-1.0, &eval.damping);
        if let Some(f) = self.forcing {
            k.axpy(1.0, &f.at(t));
        }
        k
    }

    /// `E_mult * (a + s * b)`, per mode.
    fn damped_sum(
        &self,
        a: &SpectralField,
        s: f64,
        b: &SpectralField,
        mult: &[f64],
    ) -> SpectralField {
        let mut out = a.clone();
        out.axpy(s, b);
        out.scale_modes(|idx| mult[idx]);
        out
    }

    /// `E_h u + h/6 (E_h k1 + 2 E_{h/2} (k2 + k3) + k4)`.
    fn combine(&self, u: &SpectralField, k: [&SpectralField; 4]) -> SpectralField {
        let h6 = self.cfg.dt / 6.0;
        let mut comps = u.clone().into_components();
        for c in 0..3 {
            let (k1, k2, k3, k4) = (
                k[0].component(c),
                k[1].component(c),
                k[2].component(c),
                k[3].component(c),
            );
            for (idx, z) in comps[c].iter_mut().enumerate() {
                let e = self.full[idx];
                let eh = self.half[idx];
                *z = *z * e + (k1[idx] * e + (k2[idx] + k3[idx]) * (2.0 * eh) + k4[idx]) * h6;
            }
        }
        SpectralField::from_components(self.grid, comps).expect("grid-sized")
    }

    /// Advances one step of size `dt`.
    pub fn advance(&self, state: &SolverState) -> Result<SolverState> {
        let h = self.cfg.dt;
        let t = state.t;
        let u = &state.u;

        let s1 = self.nonlinear.evaluate(u, &self.params);
        let limit = self
            .cfg
            .stability_limit(s1.linf, self.grid.cutoff_radius(), &self.params);
        if h > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { t, dt: h, limit });
        }
        let k1 = self.stage_tendency(&s1, t);

        let mut ua = self.damped_sum(u, 0.5 * h, &k1, &self.half);
        self.conform(&mut ua);
        let s2 = self.nonlinear.evaluate(&ua, &self.params);
        let k2 = self.stage_tendency(&s2, t + 0.5 * h);

        let mut ub = u.clone();
        ub.scale_modes(|idx| self.half[idx]);
        ub.axpy(0.5 * h, &k2);
        self.conform(&mut ub);
        let s3 = self.nonlinear.evaluate(&ub, &self.params);
        let k3 = self.stage_tendency(&s3, t + 0.5 * h);

        let mut uc = u.clone();
        uc.scale_modes(|idx| self.full[idx]);
        let mut k3h = k3.clone();
        k3h.scale_modes(|idx| self.half[idx]);
        uc.axpy(h, &k3h);
        self.conform(&mut uc);
        let s4 = self.nonlinear.evaluate(&uc, &self.params);
        let k4 = self.stage_tendency(&s4, t + h);

        let mut next = self.combine(u, [&k1, &k2, &k3, &k4]);
        self.conform(&mut next);

        let energy = next.l2_norm_sq();
        if !energy.is_finite() {
            return Err(Error::NonFinite {
                t: t + h,
                step: state.step_count + 1,
                energy: u.l2_norm_sq(),
            });
        }

        let weights =
            |f: fn(&StageEval) -> f64| h / 6.0 * (f(&s1) + 2.0 * f(&s2) + 2.0 * f(&s3) + f(&s4));
        let mut budget = state.budget;
        budget.viscous += weights(|s| s.viscous_rate);
        budget.damping += weights(|s| s.damping_rate);

        let duhamel = state.duhamel.as_ref().map(|split| {
            let adv = [&s1, &s2, &s3, &s4].map(|s| &s.advection * -1.0);
            let damp = [&s1, &s2, &s3, &s4].map(|s| &s.damping * -1.0);
            let mut heat = split.heat.clone();
            heat.scale_modes(|idx| self.full[idx]);
            heat.mark_solenoidal(true);
            split.advanced(
                heat,
                self.combine(&split.advective, [&adv[0], &adv[1], &adv[2], &adv[3]]),
                self.combine(&split.damping, [&damp[0], &damp[1], &damp[2], &damp[3]]),
            )
        });

        Ok(SolverState {
            t: t + h,
            u: next,
            params: state.params,
            step_count: state.step_count + 1,
            budget,
            duhamel,
        })
    }
}

/// One unforced step.
pub fn step(state: &SolverState, cfg: &StepperConfig) -> Result<SolverState> {
    Integrator::new(state.grid(), state.params, *cfg).advance(state)
}

/// One step with an additive forcing evaluated at the stage times.
pub fn step_forced(
    state: &SolverState,
    cfg: &StepperConfig,
    forcing: &dyn Forcing,
) -> Result<SolverState> {
    Integrator::new(state.grid(), state.params, *cfg)
        .with_forcing(forcing)
        .advance(state)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    /// Duration to integrate; must be a whole number of steps.
    pub duration: f64,
    /// Hooks fire every this many steps (and at the start and end).
    pub output_every: u64,
}

impl RunOptions {
    pub fn new(duration: f64, output_every: u64) -> Self {
        RunOptions {
            duration,
            output_every: output_every.max(1),
        }
    }

    pub fn steps(&self, dt: f64) -> Result<u64> {
        if !(self.duration >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "run duration must be nonnegative, got {}",
                self.duration
            )));
        }
        let n = (self.duration / dt).round();
        if (n * dt - self.duration).abs() > 1e-9 * self.duration.max(dt) {
            return Err(Error::InvalidArgument(format!(
                "duration {} is not a whole number of steps of {dt}",
                self.duration
            )));
        }
        Ok(n as u64)
    }
}

/// Integrates from `initial` for `opts.duration`, invoking every hook at the
/// output cadence. Returns the final state.
pub fn run(
    initial: SolverState,
    integrator: &Integrator<'_>,
    opts: RunOptions,
    hooks: &mut [&mut dyn Hook],
) -> Result<SolverState> {
    let n = opts.steps(integrator.config().dt)?;
    let t0 = initial.t;
    let dt = integrator.config().dt;
    let mut state = initial;
    for hook in hooks.iter_mut() {
        hook.on_snapshot(&state)?;
    }
    for k in 1..=n {
        let mut next = integrator.advance(&state)?;
        // Times are anchored to the start so long runs do not drift.
        next.t = t0 + k as f64 * dt;
        state = next;
        if k % opts.output_every == 0 || k == n {
            for hook in hooks.iter_mut() {
                hook.on_snapshot(&state)?;
            }
        }
    }
    Ok(state)
}
