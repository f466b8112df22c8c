//! Time-shift modulus `||u(t0 +- eps) - u(t0)||` against its bound over a
//! shrinking ladder of shifts.
//!
//! cargo run --release --example continuity

use nsd::harness::{continuity_experiment, parse_config, Report};

const CONFIG: &str = r#"
experiment = "continuity"

[grid]
n_modes = 16
box_length = "2pi"

[phys]
nu = 1.0
alpha = 1.0
beta = 4.0

[time]
dt = 1e-3
t_end = 0.7

[ic]
kind = "taylor-green"
amplitude = 1.0
"#;

fn main() -> nsd::Result<()> {
    let mut cfg = parse_config(CONFIG)?;
    cfg.output_dir = std::env::temp_dir().join("nsd-example-continuity");
    let report = continuity_experiment(&cfg, &[0.2, 0.1, 0.05, 0.025], 0.5)?;
    println!("{report}\npassed: {}", report.passed());
    Ok(())
}
