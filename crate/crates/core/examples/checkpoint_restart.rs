//! Checkpoint a run halfway, restart from the file and compare with the
//! uninterrupted run.
//!
//! cargo run --release --example checkpoint_restart

use std::f64::consts::PI;

use nsd::dynamics::{run, Integrator, RunOptions};
use nsd::harness::{read_checkpoint, write_checkpoint};
use nsd::initial::random_solenoidal;
use nsd::{make_grid, PhysParams, SolverState, StepperConfig};

fn main() -> nsd::Result<()> {
    let grid = make_grid(16, 2.0 * PI, 2.0 / 3.0)?;
    let params = PhysParams::new(1.0, 1.0, 4.0)?;
    let integ = Integrator::new(&grid, params, StepperConfig::new(2e-3)?);
    let start = SolverState::new(random_solenoidal(&grid, 5, 1.0)?, params)?;

    let whole = run(start.clone(), &integ, RunOptions::new(0.4, u64::MAX), &mut [])?;

    let half = run(start, &integ, RunOptions::new(0.2, u64::MAX), &mut [])?;
    let path = std::env::temp_dir().join("nsd-example-half.ckpt");
    write_checkpoint(&half, &path)?;
    let restored = read_checkpoint(&path)?;
    println!("restored t = {}, bitwise equal: {}", restored.t, restored.u == half.u);
    let resumed = run(SolverState::at_time(restored.u, params, restored.t)?, &integ, RunOptions::new(0.2, u64::MAX), &mut [])?;

    let rel = (&resumed.u - &whole.u).l2_norm() / whole.u.l2_norm();
    println!("t = {}: ||u_restart - u_continuous|| / ||u|| = {rel:.3e}", resumed.t);
    Ok(())
}
