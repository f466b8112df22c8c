//! Energy ledger of a damped Taylor-Green run: kinetic energy plus the
//! cumulative viscous and damping dissipation stays at its initial value.
//!
//! cargo run --release --example energy_budget

use std::f64::consts::PI;

use nsd::dynamics::{run, Integrator, RunOptions};
use nsd::initial::taylor_green;
use nsd::ledger::{check_energy_inequality, record_energy, EnergyQuadrature, EnergyRecord};
use nsd::{make_grid, PhysParams, SolverState, StepperConfig};

fn main() -> nsd::Result<()> {
    let grid = make_grid(16, 2.0 * PI, 2.0 / 3.0)?;
    let params = PhysParams::new(1.0, 1.0, 4.0)?;
    let start = SolverState::new(taylor_green(&grid, 2.0)?, params)?;
    let integ = Integrator::new(&grid, params, StepperConfig::new(1e-3)?);

    let mut series: Vec<EnergyRecord> = Vec::new();
    let mut ledger = |s: &SolverState| {
        let rec = match series.last() {
            None => EnergyRecord::initial(s, EnergyQuadrature::Stage)?,
            Some(prev) => record_energy(s, prev)?,
        };
        series.push(rec);
        Ok(())
    };
    run(start, &integ, RunOptions::new(0.5, 50), &mut [&mut ledger])?;

    println!("{:>6} {:>14} {:>14} {:>14} {:>11}", "t", "||u||^2", "viscous", "damping", "residual");
    for r in &series {
        println!("{:>6.3} {:>14.8e} {:>14.8e} {:>14.8e} {:>11.3e}", r.t, r.l2_sq, r.cum_visc, r.cum_damp, r.residual);
    }
    let report = check_energy_inequality(&series, 1e-6)?;
    println!("worst |residual| / ||u0||^2 = {:.3e}, passed: {}", report.worst_relative, report.passed);
    Ok(())
}
