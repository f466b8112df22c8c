//! Twin runs from `u0` and `u0 + delta p`: the difference obeys the Gronwall
//! bound, and `delta = 0` reproduces the reference bit for bit.
//!
//! cargo run --release --example twin_uniqueness

use nsd::harness::{parse_config, twin_experiment, Report};

const CONFIG: &str = r#"
experiment = "twin"

[grid]
n_modes = 16
box_length = "2pi"

[phys]
nu = 1.0
alpha = 1.0
beta = 4.0

[time]
dt = 2e-3
t_end = 0.5
output_every = 25

[ic]
kind = "random-solenoidal"
seed = 3
amplitude = 2.0
"#;

fn main() -> nsd::Result<()> {
    let mut cfg = parse_config(CONFIG)?;
    cfg.output_dir = std::env::temp_dir().join("nsd-example-twin");
    for delta in [1e-3, 0.0] {
        let report = twin_experiment(&cfg, delta)?;
        println!("{report}\npassed: {}\n", report.passed());
    }
    println!("outputs in {}", cfg.output_dir.display());
    Ok(())
}
