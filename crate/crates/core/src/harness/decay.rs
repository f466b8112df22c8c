use std::fmt;

use crate::dynamics::{Integrator, RunOptions, StepperConfig};
use crate::ledger::{lbeta_spacetime_report, LbetaReport, SeriesRow};
use crate::Result;

use super::{
    initial_state, pass_word, prepare_output, record_trajectory, write_checkpoint, write_report, write_series,
    Experiment, ExperimentConfig, Report,
};

/// `||u(t)|| <= DECAY_FRACTION ||u0||` counts as decayed.
pub const DECAY_FRACTION: f64 = 0.05;

/// Largest accepted Duhamel reconstruction error, relative.
const DUHAMEL_TOLERANCE: f64 = 1e-4;

/// Relative slack on "nonincreasing" between consecutive samples.
const MONOTONE_SLACK: f64 = 1e-12;

pub struct DecayReport {
    pub samples: usize,
    pub initial_l2: f64,
    pub final_l2: f64,
    /// First sample time with `||u|| <= 0.05 ||u0||`.
    pub decayed_at: Option<f64>,
    pub l2_monotone: bool,
    pub hminus2_tail_monotone: bool,
    pub final_w1: f64,
    pub final_w2: f64,
    pub lbeta: LbetaReport,
    pub max_duhamel_error: f64,
}

impl DecayReport {
    pub fn split_small(&self) -> bool {
        let limit = DECAY_FRACTION * self.initial_l2;
        self.final_w1 <= limit && self.final_w2 <= limit
    }
}

impl Report for DecayReport {
    fn passed(&self) -> bool {
        self.decayed_at.is_some()
            && self.l2_monotone
            && self.hminus2_tail_monotone
            && self.split_small()
            && self.lbeta.finite
            && self.lbeta.plateaued
            && !(self.max_duhamel_error > DUHAMEL_TOLERANCE)
    }
}

impl fmt::Display for DecayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "decay: {} samples, ||u0|| = {:.6e}, final ||u|| = {:.6e}", self.samples, self.initial_l2, self.final_l2)?;
        match self.decayed_at {
            Some(t) => writeln!(f, "||u(t)|| <= {DECAY_FRACTION} ||u0|| first at t = {t}")?,
            None => writeln!(f, "||u(t)|| never dropped below {DECAY_FRACTION} ||u0||: VIOLATED")?,
        }
        writeln!(f, "||u|| nonincreasing: {}", pass_word(self.l2_monotone))?;
        writeln!(f, "H^-2 norm nonincreasing over the last half: {}", pass_word(self.hminus2_tail_monotone))?;
        writeln!(f, "final split norms: low {:.4e}, high {:.4e}: {}", self.final_w1, self.final_w2, pass_word(self.split_small()))?;
        let l = &self.lbeta;
        writeln!(
            f,
            "L^beta space-time: L1 = {:.6e}, L2 = {:.6e}, majorant {:.6e} (embedding ratio {:.4e}), bound {}",
            l.l1,
            l.l2,
            l.majorant,
            l.embedding_constant,
            pass_word(l.majorant_holds)
        )?;
        writeln!(
            f,
            "final-decile share of L1 + L2: {:.3e}: {}; tail increments decreasing: {}",
            l.final_decile_share,
            pass_word(l.plateaued),
            l.tail_increments_decreasing
        )?;
        write!(f, "max Duhamel reconstruction error: {:.3e}", self.max_duhamel_error)
    }
}

fn nonincreasing(values: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = values.collect();
    v.windows(2).all(|w| w[1] <= w[0] * (1.0 + MONOTONE_SLACK))
}

pub fn decay_experiment(cfg: &ExperimentConfig) -> Result<DecayReport> {
    cfg.check_for(Experiment::Decay)?;
    let dir = &cfg.output_dir;
    prepare_output(dir)?;
    let initial = initial_state(cfg)?.with_duhamel();
    let integ = Integrator::new(&cfg.grid, cfg.phys, StepperConfig::new(cfg.time.dt)?);
    let traj = record_trajectory(initial, &integ, RunOptions::new(cfg.time.t_end, cfg.time.output_every), &mut [])?;
    write_series(dir, &traj.rows)?;
    write_checkpoint(&traj.final_state, dir.join("final.ckpt"))?;

    let rows: &[SeriesRow] = &traj.rows;
    let first = &rows[0].decay;
    let last = &rows[rows.len() - 1].decay;
    let u0 = first.l2;
    let diags: Vec<_> = rows.iter().map(|r| r.decay).collect();
    let report = DecayReport {
        samples: rows.len(),
        initial_l2: u0,
        final_l2: last.l2,
        decayed_at: rows.iter().find(|r| r.decay.l2 <= DECAY_FRACTION * u0).map(|r| r.decay.t),
        l2_monotone: nonincreasing(rows.iter().map(|r| r.decay.l2)),
        hminus2_tail_monotone: nonincreasing(rows[rows.len() / 2..].iter().map(|r| r.decay.hminus2)),
        final_w1: last.w1_l2,
        final_w2: last.w2_l2,
        lbeta: lbeta_spacetime_report(&diags, &traj.energy(), &cfg.phys)?,
        max_duhamel_error: rows.iter().map(|r| r.decay.duhamel_error).fold(0.0, f64::max),
    };
    write_report(dir, cfg, &report)?;
    Ok(report)
}
