//! Configuration, checkpoints and the experiment drivers.
//!
//! Every driver takes an [`ExperimentConfig`], writes `report.txt` (and, where
//! it applies, `series.csv` and `*.ckpt`) into `output.directory`, and returns
//! a report whose [`Report::passed`] decides the process exit code.

mod checkpoint;
mod config;
mod continuity;
mod decay;
mod refine;
mod run;
mod twin;

use std::fmt;
use std::fs;
use std::path::Path;

pub use checkpoint::{decode_checkpoint, encode_checkpoint, read_checkpoint, write_checkpoint, MAGIC};
pub use config::{load_config, parse_config, Experiment, ExperimentConfig, InitialCondition, TimeConfig};
pub use continuity::{continuity_experiment, ContinuityReport, ShiftRow};
pub use decay::{decay_experiment, DecayReport, DECAY_FRACTION};
pub use refine::{refinement_experiment, MmsReport, RefineReport};
pub use run::{record_trajectory, run_experiment, RunReport, Trajectory, ENERGY_TOLERANCE};
pub use twin::{twin_experiment, TwinReport, TwinSample};

use crate::dynamics::SolverState;
use crate::initial::{random_solenoidal, shear_mode, taylor_green};
use crate::ledger::{write_series_csv, SeriesRow};
use crate::{Error, Result};

/// Multiplicative slack on every analytic bound.
pub const BOUND_SLACK: f64 = 1.1;

pub trait Report: fmt::Display {
    fn passed(&self) -> bool;
}

/// Exit code for the command line: 0 pass, 1 violation or runtime failure,
/// 2 configuration error.
pub fn exit_code(outcome: &Result<bool>) -> i32 {
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Error::Config { .. }) => 2,
        Err(_) => 1,
    }
}

/// Caps the global worker pool at `NSD_THREADS` when set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("NSD_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config { key: "NSD_THREADS".into(), message: format!("expected a positive integer, got `{v}`") })?;
        // A pool built earlier in the process keeps its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Builds the configured initial state.
pub fn initial_state(cfg: &ExperimentConfig) -> Result<SolverState> {
    let g = &cfg.grid;
    let u = match &cfg.ic {
        InitialCondition::TaylorGreen { amplitude } => taylor_green(g, *amplitude)?,
        InitialCondition::RandomSolenoidal { seed, amplitude } => random_solenoidal(g, *seed, *amplitude)?,
        InitialCondition::Shear { amplitude } => shear_mode(g, *amplitude)?,
        InitialCondition::Checkpoint { path } => {
            let s = read_checkpoint(path)?;
            if s.grid() != g {
                return Err(Error::Config {
                    key: "ic.path".into(),
                    message: format!("checkpoint grid {:?} differs from the configured grid {:?}", s.grid(), g),
                });
            }
            return SolverState::at_time(s.u, cfg.phys, s.t);
        }
    };
    SolverState::new(u, cfg.phys)
}

pub(crate) fn prepare_output(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

pub(crate) fn write_report(dir: &Path, cfg: &ExperimentConfig, report: &dyn Report) -> Result<()> {
    let text = format!(
        "{report}\nresult: {}\n\n# configuration\n{}",
        if report.passed() { "PASS" } else { "FAIL" },
        cfg.canonical()
    );
    fs::write(dir.join("report.txt"), text)?;
    Ok(())
}

pub(crate) fn write_series(dir: &Path, rows: &[SeriesRow]) -> Result<()> {
    write_series_csv(std::io::BufWriter::new(fs::File::create(dir.join("series.csv"))?), rows)
}

/// Number of steps of `dt` in `duration`, which must be a whole multiple.
pub(crate) fn whole_steps(duration: f64, dt: f64, what: &str) -> Result<u64> {
    let n = (duration / dt).round();
    if n < 0.0 || (n * dt - duration).abs() > 1e-9 * duration.abs().max(dt) {
        return Err(Error::InvalidArgument(format!("{what} = {duration} is not a whole number of steps of {dt}")));
    }
    Ok(n as u64)
}

pub(crate) fn pass_word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATED"
    }
}
