//! Spatial convergence across doubled grids and the temporal order of the
//! integrator against a forced exact solution.
//!
//! cargo run --release --example refinement

use nsd::harness::{parse_config, refinement_experiment, Report};

const CONFIG: &str = r#"
experiment = "refine"

[grid]
n_modes = 8
box_length = "2pi"

[phys]
nu = 1.0
alpha = 1.0
beta = 4.0

[time]
dt = 5e-3
t_end = 0.2

[ic]
kind = "taylor-green"
amplitude = 2.0
"#;

fn main() -> nsd::Result<()> {
    let mut cfg = parse_config(CONFIG)?;
    cfg.output_dir = std::env::temp_dir().join("nsd-example-refine");
    let report = refinement_experiment(&cfg, &[8, 16, 32])?;
    println!("{report}\npassed: {}", report.passed());
    Ok(())
}
