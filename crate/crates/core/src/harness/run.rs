use std::fmt;

use crate::dynamics::{run, Hook, Integrator, RunOptions, SolverState, StepperConfig};
use crate::ledger::{check_energy_inequality, decay_snapshot, record_energy, EnergyQuadrature, EnergyRecord, EnergyReport, SeriesRow};
use crate::Result;

use super::{initial_state, prepare_output, write_checkpoint, write_report, write_series, ExperimentConfig, Report};

/// Relative energy residual accepted on resolved runs.
pub const ENERGY_TOLERANCE: f64 = 1e-6;

pub struct Trajectory {
    pub rows: Vec<SeriesRow>,
    pub final_state: SolverState,
}

impl Trajectory {
    pub fn energy(&self) -> Vec<EnergyRecord> {
        self.rows.iter().map(|r| r.energy).collect()
    }
}

/// Runs `initial` for `opts.duration`, collecting one ledger row per
/// snapshot; `extra` hooks see the same snapshots.
pub fn record_trajectory(
    initial: SolverState,
    integrator: &Integrator<'_>,
    opts: RunOptions,
    extra: &mut [&mut dyn Hook],
) -> Result<Trajectory> {
    let mut rows: Vec<SeriesRow> = Vec::new();
    let mut ledger = |s: &SolverState| {
        let row = match rows.last() {
            None => SeriesRow { energy: EnergyRecord::initial(s, EnergyQuadrature::Stage)?, decay: decay_snapshot(s, None)? },
            Some(prev) => SeriesRow {
                energy: record_energy(s, &prev.energy)?,
                decay: decay_snapshot(s, Some(&prev.decay))?,
            },
        };
        rows.push(row);
        Ok(())
    };
    let mut hooks: Vec<&mut dyn Hook> = vec![&mut ledger];
    hooks.extend(extra.iter_mut().map(|h| &mut **h as &mut dyn Hook));
    let final_state = run(initial, integrator, opts, &mut hooks)?;
    Ok(Trajectory { rows, final_state })
}

pub struct RunReport {
    pub energy: EnergyReport,
    pub final_t: f64,
    pub final_l2: f64,
    pub final_divergence: f64,
    pub invariants_ok: bool,
}

impl Report for RunReport {
    fn passed(&self) -> bool {
        self.energy.passed && self.invariants_ok
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.energy;
        writeln!(f, "run: {} snapshots up to t = {}", e.records, self.final_t)?;
        writeln!(
            f,
            "energy residual: worst |r|/|u0|^2 = {:.3e} at t = {} (tol {:.1e}){}",
            e.worst_relative,
            e.worst_t,
            e.tolerance,
            e.first_violation.map_or(String::new(), |t| format!(", first violation at t = {t}"))
        )?;
        writeln!(f, "dissipation monotone: {}", e.dissipation_monotone)?;
        writeln!(f, "final ||u|| = {:.6e}, relative divergence {:.2e}", self.final_l2, self.final_divergence)?;
        write!(f, "final invariants: {}", if self.invariants_ok { "ok" } else { "VIOLATED" })
    }
}

/// Plain run: ledger series, a final checkpoint and the energy check.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    let dir = &cfg.output_dir;
    prepare_output(dir)?;
    let initial = initial_state(cfg)?.with_duhamel();
    let integ = Integrator::new(&cfg.grid, cfg.phys, StepperConfig::new(cfg.time.dt)?);
    let traj = record_trajectory(initial, &integ, RunOptions::new(cfg.time.t_end, cfg.time.output_every), &mut [])?;
    write_series(dir, &traj.rows)?;
    write_checkpoint(&traj.final_state, dir.join("final.ckpt"))?;
    let u = &traj.final_state.u;
    let report = RunReport {
        energy: check_energy_inequality(&traj.energy(), ENERGY_TOLERANCE)?,
        final_t: traj.final_state.t,
        final_l2: u.l2_norm(),
        final_divergence: u.divergence_relative(),
        invariants_ok: u.check_invariants(1e-10).is_ok(),
    };
    write_report(dir, cfg, &report)?;
    Ok(report)
}
