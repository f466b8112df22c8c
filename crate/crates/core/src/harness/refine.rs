use std::fmt;
use std::fmt::Write as _;
use std::fs;

use crate::dynamics::{manufactured_forcing, run, Integrator, ManufacturedTarget, RunOptions, SolverState, StepperConfig};
use crate::grid::make_grid;
use crate::initial::taylor_green;
use crate::spectral::{fits_on, resample};
use crate::{Error, GridSpec, Result};

use super::{initial_state, pass_word, prepare_output, write_report, ExperimentConfig, Report};

/// Required shrink factor of inter-level differences per doubling.
pub const SPATIAL_RATIO: f64 = 4.0;
/// Required observed temporal order of the manufactured solution.
pub const TEMPORAL_ORDER: f64 = 3.7;
/// Differences below this (relative) count as converged to roundoff.
const IDENTICAL: f64 = 1e-10;
/// Pulsation of the manufactured target.
pub const MMS_OMEGA: f64 = 8.0;

pub struct MmsReport {
    pub dts: Vec<f64>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
}

impl MmsReport {
    pub fn observed_order(&self) -> f64 {
        self.orders.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub struct RefineReport {
    pub levels: Vec<usize>,
    /// `||u_N(T) - u_2N(T)|| / ||u_finest(T)||`.
    pub differences: Vec<f64>,
    pub ratios: Vec<f64>,
    pub mms: MmsReport,
}

impl RefineReport {
    pub fn spatial_ok(&self) -> bool {
        self.differences
            .windows(2)
            .all(|w| w[0] <= IDENTICAL || w[1] * SPATIAL_RATIO <= w[0])
            && self.differences.iter().all(|d| d.is_finite())
    }

    pub fn temporal_ok(&self) -> bool {
        self.mms.observed_order() >= TEMPORAL_ORDER
    }
}

impl Report for RefineReport {
    fn passed(&self) -> bool {
        self.spatial_ok() && self.temporal_ok()
    }
}

impl fmt::Display for RefineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "refinement over levels {:?}", self.levels)?;
        for (i, d) in self.differences.iter().enumerate() {
            write!(f, "  |u_{} - u_{}| / |u| = {:.4e}", self.levels[i], self.levels[i + 1], d)?;
            match self.ratios.get(i.wrapping_sub(1)) {
                Some(r) if i > 0 => writeln!(f, "  (shrink {:.2}x)", r)?,
                _ => writeln!(f)?,
            }
        }
        writeln!(f, "spatial convergence (>= {SPATIAL_RATIO}x per doubling): {}", pass_word(self.spatial_ok()))?;
        writeln!(f, "manufactured solution, omega = {MMS_OMEGA}:")?;
        for (i, (dt, e)) in self.mms.dts.iter().zip(&self.mms.errors).enumerate() {
            write!(f, "  dt = {dt:.3e}: error {e:.4e}")?;
            match self.mms.orders.get(i.wrapping_sub(1)) {
                Some(o) if i > 0 => writeln!(f, "  (order {o:.3})")?,
                _ => writeln!(f)?,
            }
        }
        write!(f, "temporal order {:.3} (>= {TEMPORAL_ORDER}): {}", self.mms.observed_order(), pass_word(self.temporal_ok()))
    }
}

fn level_grid(cfg: &ExperimentConfig, n: usize) -> Result<GridSpec> {
    make_grid(n, cfg.grid.box_length(), cfg.cutoff_fraction)
}

/// Temporal order of the Lawson scheme against a forced exact solution on
/// `grid`, at `dt`, `dt/2`, `dt/4` up to `t_end`.
fn manufactured_order(cfg: &ExperimentConfig, grid: &GridSpec) -> Result<MmsReport> {
    let target = ManufacturedTarget::PulsingTaylorGreen { amplitude: 1.0, omega: MMS_OMEGA };
    let forcing = manufactured_forcing(target, grid, cfg.phys)?;
    let exact = forcing.target(cfg.time.t_end);
    let dts: Vec<f64> = [1.0, 0.5, 0.25].iter().map(|s| s * cfg.time.dt).collect();
    let mut errors = Vec::new();
    for &dt in &dts {
        let start = SolverState::new(forcing.target(0.0), cfg.phys)?;
        let integ = Integrator::new(grid, cfg.phys, StepperConfig::new(dt)?).with_forcing(&forcing);
        let end = run(start, &integ, RunOptions::new(cfg.time.t_end, u64::MAX), &mut [])?;
        errors.push((&end.u - &exact).l2_norm() / exact.l2_norm());
    }
    let orders = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok(MmsReport { dts, errors, orders })
}

pub fn refinement_experiment(cfg: &ExperimentConfig, levels: &[usize]) -> Result<RefineReport> {
    if levels.len() < 3 {
        return Err(Error::InvalidArgument(format!("refinement needs at least 3 levels, got {}", levels.len())));
    }
    if levels.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::InvalidArgument(format!("levels must double: {levels:?}")));
    }
    if !(cfg.time.t_end > 0.0) {
        return Err(Error::InvalidArgument("refinement needs time.t_end > 0".into()));
    }
    let dir = &cfg.output_dir;
    prepare_output(dir)?;
    let grids: Vec<GridSpec> = levels.iter().map(|&n| level_grid(cfg, n)).collect::<Result<_>>()?;
    let coarse = &grids[0];
    let finest = grids.last().expect("three levels");

    let ic = initial_state(cfg)?;
    if !fits_on(&ic.u, coarse) {
        return Err(Error::InvalidArgument(format!(
            "initial condition is not representable at the coarsest level n_modes = {}",
            levels[0]
        )));
    }
    let mut finals = Vec::new();
    for g in &grids {
        let start = SolverState::at_time(resample(&ic.u, g)?, cfg.phys, ic.t)?;
        let integ = Integrator::new(g, cfg.phys, StepperConfig::new(cfg.time.dt)?);
        let end = run(start, &integ, RunOptions::new(cfg.time.t_end, u64::MAX), &mut [])?;
        finals.push(resample(&end.u, finest)?);
    }
    let scale = finals.last().expect("three levels").l2_norm().max(f64::MIN_POSITIVE);
    let differences: Vec<f64> = finals.windows(2).map(|w| (&w[0] - &w[1]).l2_norm() / scale).collect();
    let ratios = differences.windows(2).map(|w| w[0] / w[1]).collect();

    // The manufactured target needs the Taylor-Green modes on the coarse grid.
    taylor_green(coarse, 1.0)?;
    let mms = manufactured_order(cfg, coarse)?;
    let report = RefineReport { levels: levels.to_vec(), differences, ratios, mms };

    let mut csv = String::from("kind,level_or_dt,value\n");
    for (i, d) in report.differences.iter().enumerate() {
        let _ = writeln!(csv, "difference,{},{:.17e}", report.levels[i], d);
    }
    for (dt, e) in report.mms.dts.iter().zip(&report.mms.errors) {
        let _ = writeln!(csv, "mms_error,{dt:.17e},{e:.17e}");
    }
    fs::write(dir.join("refinement.csv"), csv)?;
    write_report(dir, cfg, &report)?;
    Ok(report)
}
