//! Energy-budget accounting and large-time decay diagnostics.
//!
//! The budget is `||u(t)||^2 + 2 int ||grad u||^2 + 2 alpha int ||u||^(beta+1)_{L^(beta+1)}`,
//! which the truncated system conserves; the recorded `residual` is that sum
//! minus `||u(0)||^2`.

mod csv;
mod decay;
mod duhamel;

pub use self::csv::{write_series_csv, SeriesRow, CSV_HEADER};
pub use decay::{
    decay_snapshot, lbeta_increment, lbeta_spacetime_report, DecayDiagnostics, LbetaReport,
    SpacetimeAccumulators, PLATEAU_SHARE,
};
pub use duhamel::{duhamel_split, DuhamelNorms, DuhamelSplit};

use crate::dynamics::SolverState;
use crate::spectral::lp_integral_samples;
use crate::spectral::to_physical;
use crate::{Error, Result};

/// How cumulative dissipation is integrated in time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EnergyQuadrature {
    /// Read the integrals the stepper accumulates with its own stage weights.
    #[default]
    Stage,
    /// Trapezoidal rule over the snapshots handed to [`record_energy`].
    Trapezoid,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyRecord {
    pub t: f64,
    pub l2_sq: f64,
    pub cum_visc: f64,
    pub cum_damp: f64,
    pub residual: f64,
    /// `||u(0)||^2` of the series this record belongs to.
    pub initial_l2_sq: f64,
    pub quadrature: EnergyQuadrature,
    /// Instantaneous rates at `t` (trapezoid bookkeeping).
    pub visc_rate: f64,
    pub damp_rate: f64,
    /// Stage budget at `t`, subtracted so series can start mid-run.
    budget_offset: (f64, f64),
}

fn rates(state: &SolverState) -> Result<(f64, f64)> {
    let p = &state.params;
    let visc = 2.0 * p.nu * state.u.grad_norm_sq();
    let damp = if p.alpha > 0.0 {
        2.0 * p.alpha * lp_integral_samples(&to_physical(&state.u), p.beta + 1.0)?
    } else {
        0.0
    };
    Ok((visc, damp))
}

impl EnergyRecord {
    /// First record of a series; `residual` is exactly zero.
    pub fn initial(state: &SolverState, quadrature: EnergyQuadrature) -> Result<Self> {
        let l2_sq = state.u.l2_norm_sq();
        let (visc_rate, damp_rate) = match quadrature {
            EnergyQuadrature::Stage => (0.0, 0.0),
            EnergyQuadrature::Trapezoid => rates(state)?,
        };
        Ok(EnergyRecord {
            t: state.t,
            l2_sq,
            cum_visc: 0.0,
            cum_damp: 0.0,
            residual: 0.0,
            initial_l2_sq: l2_sq,
            quadrature,
            visc_rate,
            damp_rate,
            budget_offset: (state.budget.viscous, state.budget.damping),
        })
    }
}

/// Extends a series by one snapshot.
pub fn record_energy(state: &SolverState, prev: &EnergyRecord) -> Result<EnergyRecord> {
    if !(state.t > prev.t) {
        return Err(Error::InvalidArgument(format!(
            "energy records must advance in time: {} after {}",
            state.t, prev.t
        )));
    }
    let l2_sq = state.u.l2_norm_sq();
    let mut rec = EnergyRecord {
        t: state.t,
        l2_sq,
        ..*prev
    };
    match prev.quadrature {
        EnergyQuadrature::Stage => {
            rec.cum_visc = state.budget.viscous - prev.budget_offset.0;
            rec.cum_damp = state.budget.damping - prev.budget_offset.1;
        }
        EnergyQuadrature::Trapezoid => {
            let (v, d) = rates(state)?;
            let half = 0.5 * (state.t - prev.t);
            rec.cum_visc = prev.cum_visc + half * (prev.visc_rate + v);
            rec.cum_damp = prev.cum_damp + half * (prev.damp_rate + d);
            rec.visc_rate = v;
            rec.damp_rate = d;
        }
    }
    rec.residual = rec.l2_sq + rec.cum_visc + rec.cum_damp - rec.initial_l2_sq;
    Ok(rec)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub passed: bool,
    pub tolerance: f64,
    pub records: usize,
    /// Largest `|residual| / ||u0||^2` and where it occurs.
    pub worst_relative: f64,
    pub worst_t: f64,
    /// First time at which `residual > tol ||u0||^2`.
    pub first_violation: Option<f64>,
    /// Whether cumulative dissipation never decreased.
    pub dissipation_monotone: bool,
}

/// Checks `residual <= tol ||u0||^2` at every record.
pub fn check_energy_inequality(series: &[EnergyRecord], tol: f64) -> Result<EnergyReport> {
    let first = series
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty energy series".into()))?;
    let scale = if first.initial_l2_sq > 0.0 {
        first.initial_l2_sq
    } else {
        1.0
    };
    let mut report = EnergyReport {
        passed: true,
        tolerance: tol,
        records: series.len(),
        worst_relative: 0.0,
        worst_t: first.t,
        first_violation: None,
        dissipation_monotone: true,
    };
    for (i, r) in series.iter().enumerate() {
        let rel = r.residual / scale;
        if rel.abs() > report.worst_relative {
            report.worst_relative = rel.abs();
            report.worst_t = r.t;
        }
        if !(rel <= tol) && report.first_violation.is_none() {
            report.first_violation = Some(r.t);
            report.passed = false;
        }
        if i > 0 {
            let p = &series[i - 1];
            if r.cum_visc < p.cum_visc || r.cum_damp < p.cum_damp {
                report.dissipation_monotone = false;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run, Integrator, RunOptions, StepperConfig};
    use crate::grid::make_grid;
    use crate::initial::{shear_mode, taylor_green};
    use crate::{PhysParams, SpectralField};
    use std::f64::consts::PI;

    fn series(
        state: SolverState,
        dt: f64,
        t_end: f64,
        every: u64,
        q: EnergyQuadrature,
    ) -> Vec<EnergyRecord> {
        let integ = Integrator::new(state.grid(), state.params, StepperConfig::new(dt).unwrap());
        let mut out: Vec<EnergyRecord> = Vec::new();
        let mut hook = |s: &SolverState| {
            let rec = match out.last() {
                None => EnergyRecord::initial(s, q)?,
                Some(prev) => record_energy(s, prev)?,
            };
            out.push(rec);
            Ok(())
        };
        run(
            state,
            &integ,
            RunOptions::new(t_end, every),
            &mut [&mut hook],
        )
        .unwrap();
        out
    }

    #[test]
    fn zero_field_budget_is_zero() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let s = SolverState::new(
            SpectralField::zeros(g),
            PhysParams::new(1.0, 1.0, 4.0).unwrap(),
        )
        .unwrap();
        for r in series(s, 0.01, 0.1, 1, EnergyQuadrature::Stage) {
            assert_eq!(
                (r.l2_sq, r.cum_visc, r.cum_damp, r.residual),
                (0.0, 0.0, 0.0, 0.0)
            );
        }
    }

    #[test]
    fn heat_budget_closes_at_scheme_order() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let s = SolverState::new(
            shear_mode(&g, 1.0).unwrap(),
            PhysParams::new(1.0, 0.0, 4.0).unwrap(),
        )
        .unwrap();
        let worst = |dt: f64| {
            series(s.clone(), dt, 1.0, 1, EnergyQuadrature::Stage)
                .iter()
                .map(|r| (r.residual / r.initial_l2_sq).abs())
                .fold(0.0, f64::max)
        };
        let (coarse, fine) = (worst(0.1), worst(0.05));
        assert!(coarse < 1e-5, "coarse residual {coarse}");
        // Fourth order: halving dt cuts the residual ~16x.
        assert!(coarse / fine > 12.0, "ratio {}", coarse / fine);
    }

    #[test]
    fn trapezoid_budget_is_second_order_in_cadence() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let s = SolverState::new(
            taylor_green(&g, 1.0).unwrap(),
            PhysParams::new(1.0, 0.0, 4.0).unwrap(),
        )
        .unwrap();
        let worst = |every: u64| {
            series(s.clone(), 1e-3, 0.5, every, EnergyQuadrature::Trapezoid)
                .iter()
                .map(|r| (r.residual / r.initial_l2_sq).abs())
                .fold(0.0, f64::max)
        };
        let ratio = worst(20) / worst(10);
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn inequality_check_flags_inflated_energy() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let s = SolverState::new(
            taylor_green(&g, 1.0).unwrap(),
            PhysParams::new(1.0, 1.0, 4.0).unwrap(),
        )
        .unwrap();
        let mut recs = series(s.clone(), 1e-3, 0.05, 5, EnergyQuadrature::Stage);
        let ok = check_energy_inequality(&recs, 1e-6).unwrap();
        assert!(ok.passed && ok.dissipation_monotone);
        recs[3].l2_sq *= 1.01;
        recs[3].residual =
            recs[3].l2_sq + recs[3].cum_visc + recs[3].cum_damp - recs[3].initial_l2_sq;
        let bad = check_energy_inequality(&recs, 1e-6).unwrap();
        assert!(!bad.passed);
        assert_eq!(bad.first_violation, Some(recs[3].t));

        let single = vec![EnergyRecord::initial(&s, EnergyQuadrature::Stage).unwrap()];
        let rep = check_energy_inequality(&single, 0.0).unwrap();
        assert!(rep.passed && single[0].residual == 0.0);
        assert!(check_energy_inequality(&[], 1e-6).is_err());
    }

    #[test]
    fn rejects_non_monotone_time() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let s = SolverState::new(
            taylor_green(&g, 1.0).unwrap(),
            PhysParams::new(1.0, 1.0, 4.0).unwrap(),
        )
        .unwrap();
        let r = EnergyRecord::initial(&s, EnergyQuadrature::Stage).unwrap();
        assert!(record_energy(&s, &r).is_err());
    }
}
