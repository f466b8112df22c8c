use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::dynamics::{Integrator, RunOptions, SolverState, StepperConfig};
use crate::oracles::gronwall_constant;
use crate::{Error, Result, SpectralField};

use super::{
    initial_state, pass_word, prepare_output, record_trajectory, whole_steps, write_report, write_series, Experiment,
    ExperimentConfig, Report, BOUND_SLACK,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftRow {
    pub eps: f64,
    /// `||u(t0 + eps) - u(t0)||`.
    pub forward: f64,
    /// `||u(t0) - u(t0 - eps)||`.
    pub backward: f64,
    /// `2 (||u0||^2 - Re <u(eps), u0>) e^{2 C t0}`.
    pub rhs: f64,
}

impl ShiftRow {
    pub fn holds(&self) -> bool {
        let limit = BOUND_SLACK * self.rhs;
        self.forward * self.forward <= limit && self.backward * self.backward <= limit
    }
}

pub struct ContinuityReport {
    pub t0: f64,
    pub constant: f64,
    /// Sorted by decreasing `eps`.
    pub rows: Vec<ShiftRow>,
    pub modulus_decreasing: bool,
    pub rhs_decreasing: bool,
}

impl ContinuityReport {
    pub fn bound_holds(&self) -> bool {
        self.rows.iter().all(ShiftRow::holds)
    }
}

impl Report for ContinuityReport {
    fn passed(&self) -> bool {
        self.bound_holds() && self.modulus_decreasing && self.rhs_decreasing
    }
}

impl fmt::Display for ContinuityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "continuity: t0 = {}, C = {}", self.t0, self.constant)?;
        writeln!(f, "{:>10} {:>14} {:>14} {:>14}  bound", "eps", "|u(t0+e)-u|", "|u-u(t0-e)|", "rhs")?;
        for r in &self.rows {
            writeln!(f, "{:>10} {:>14.6e} {:>14.6e} {:>14.6e}  {}", r.eps, r.forward, r.backward, r.rhs, pass_word(r.holds()))?;
        }
        writeln!(f, "modulus strictly decreasing along the ladder: {}", self.modulus_decreasing)?;
        write!(f, "bound rhs decreasing toward eps -> 0: {}", self.rhs_decreasing)
    }
}

/// One reference run with snapshots at `eps`, `t0` and `t0 +- eps`; checks the
/// time-shift bound for every `eps`.
pub fn continuity_experiment(cfg: &ExperimentConfig, epsilons: &[f64], t0: f64) -> Result<ContinuityReport> {
    cfg.check_for(Experiment::Continuity)?;
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument("empty eps ladder".into()));
    }
    for &e in epsilons {
        if !(e > 0.0 && e < t0) {
            return Err(Error::InvalidArgument(format!("each eps must satisfy 0 < eps < t0 = {t0}, got {e}")));
        }
    }
    let dt = cfg.time.dt;
    let n0 = whole_steps(t0, dt, "t0")?;
    let mut eps: Vec<(f64, u64)> =
        epsilons.iter().map(|&e| Ok((e, whole_steps(e, dt, "eps")?))).collect::<Result<_>>()?;
    eps.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut wanted: BTreeSet<u64> = [0, n0].into();
    for &(_, k) in &eps {
        wanted.extend([k, n0 - k, n0 + k]);
    }
    let last = *wanted.iter().next_back().expect("nonempty");

    let dir = &cfg.output_dir;
    prepare_output(dir)?;
    let c = gronwall_constant(cfg.phys.alpha, cfg.phys.beta)?;
    let initial = initial_state(cfg)?;
    let start = initial.step_count;
    let integ = Integrator::new(&cfg.grid, cfg.phys, StepperConfig::new(dt)?);
    let mut snaps: BTreeMap<u64, SpectralField> = BTreeMap::new();
    let mut grab = |s: &SolverState| {
        let k = s.step_count - start;
        if wanted.contains(&k) {
            snaps.insert(k, s.u.clone());
        }
        Ok(())
    };
    let traj = record_trajectory(initial, &integ, RunOptions::new(last as f64 * dt, 1), &mut [&mut grab])?;
    // The ledger keeps every tenth row; the snapshots above are exact steps.
    let rows: Vec<_> = traj.rows.iter().step_by(10).copied().collect();
    write_series(dir, &rows)?;

    let u0 = &snaps[&0];
    let u_t0 = &snaps[&n0];
    let growth = (2.0 * c * t0).exp();
    let table: Vec<ShiftRow> = eps
        .iter()
        .map(|&(e, k)| ShiftRow {
            eps: e,
            forward: (&snaps[&(n0 + k)] - u_t0).l2_norm(),
            backward: (u_t0 - &snaps[&(n0 - k)]).l2_norm(),
            rhs: 2.0 * (u0.l2_norm_sq() - snaps[&k].inner(u0)) * growth,
        })
        .collect();
    let report = ContinuityReport {
        t0,
        constant: c,
        modulus_decreasing: table.windows(2).all(|w| w[1].forward < w[0].forward),
        rhs_decreasing: table.windows(2).all(|w| w[1].rhs < w[0].rhs),
        rows: table,
    };
    write_report(dir, cfg, &report)?;
    Ok(report)
}
