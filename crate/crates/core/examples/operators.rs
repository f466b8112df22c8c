//! Spectral operators on a random field: projection, truncation, norms and
//! the pressure recovered from a Taylor-Green flow.
//!
//! cargo run --example operators

use std::f64::consts::PI;

use nsd::dynamics::pressure_field;
use nsd::initial::{random_band_limited, taylor_green};
use nsd::spectral::{divergence, friedrichs_truncate, leray_project, lp_norm_physical, sobolev_norm, to_physical, to_spectral};
use nsd::{make_grid, PhysParams};

fn main() -> nsd::Result<()> {
    let grid = make_grid(16, 2.0 * PI, 2.0 / 3.0)?;
    let raw = random_band_limited(&grid, 7, 1.0, grid.cutoff_radius(), false)?;
    println!("raw field: ||u|| = {:.6}, max |div u| = {:.3e}", raw.l2_norm(), raw.divergence_max());

    let p = leray_project(&raw);
    let pp = leray_project(&p);
    println!("after P: ||div u|| = {:.3e}", divergence(&p).l2_norm());
    println!("idempotence ||PPu - Pu|| = {:.3e}", (&pp - &p).l2_norm());

    let r = 0.5 * grid.cutoff_radius();
    let jp = friedrichs_truncate(&p, r)?;
    let pj = leray_project(&friedrichs_truncate(&raw, r)?);
    println!("commutation ||JPu - PJu|| = {:.3e}", (&jp - &pj).l2_norm());

    let back = to_spectral(&to_physical(&p), &grid)?;
    println!("round trip through the grid: {:.3e}", (&back - &p).l2_norm() / p.l2_norm());
    println!("Parseval: spectral {:.12}, physical {:.12}", p.l2_norm(), lp_norm_physical(&p, 2.0)?);

    for s in [-2.0, -1.0, 1.0, 2.0] {
        println!("  homogeneous H^{s:+}: {:.6e}", sobolev_norm(&p, s, true));
    }

    let tg = taylor_green(&grid, 1.0)?;
    let pressure = pressure_field(&tg, &PhysParams::new(1.0, 0.0, 4.0)?);
    // p = (cos 2x + cos 2y)(cos 2z + 2) / 16 at amplitude 1.
    println!("Taylor-Green ||p|| = {:.12} (closed form {:.12})", pressure.l2_norm(), 3.0 * PI.powf(1.5) / 8.0);
    Ok(())
}
