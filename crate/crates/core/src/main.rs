use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nsd::harness::{self, load_config, Experiment, ExperimentConfig, Report};
use nsd::oracles::{verify, SuiteSizes};

#[derive(Parser)]
#[command(name = "nsd", about = "Damped Navier-Stokes solver and verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configuration and check the energy budget.
    Run { config: PathBuf },
    /// Run the inequality oracle suite.
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Twin-run separation against the Gronwall bound.
    Twin {
        config: PathBuf,
        #[arg(long)]
        delta: f64,
    },
    /// Time-shift modulus at t0 for a ladder of eps.
    Continuity {
        config: PathBuf,
        #[arg(long)]
        t0: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
    },
    /// Large-time decay diagnostics.
    Decay { config: PathBuf },
    /// Inter-level convergence and manufactured-solution temporal order.
    Refine {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
    },
}

fn report(r: nsd::Result<impl Report>) -> nsd::Result<bool> {
    let r = r?;
    println!("{r}");
    Ok(r.passed())
}

fn config(path: &PathBuf, experiment: Experiment) -> nsd::Result<ExperimentConfig> {
    let cfg = load_config(path)?;
    cfg.check_for(experiment)?;
    Ok(cfg)
}

fn execute(cmd: Command) -> nsd::Result<bool> {
    harness::init_threads()?;
    match cmd {
        Command::Run { config: p } => report(harness::run_experiment(&config(&p, Experiment::Run)?)),
        Command::Verify { seed } => {
            let rows = verify(SuiteSizes::default(), seed);
            for row in &rows {
                println!("{row}");
            }
            Ok(rows.iter().all(|r| r.passed))
        }
        Command::Twin { config: p, delta } => report(harness::twin_experiment(&config(&p, Experiment::Twin)?, delta)),
        Command::Continuity { config: p, t0, eps } => {
            report(harness::continuity_experiment(&config(&p, Experiment::Continuity)?, &eps, t0))
        }
        Command::Decay { config: p } => report(harness::decay_experiment(&config(&p, Experiment::Decay)?)),
        Command::Refine { config: p, levels } => {
            report(harness::refinement_experiment(&config(&p, Experiment::Refine)?, &levels))
        }
    }
}

fn main() -> ExitCode {
    let outcome = execute(Cli::parse().command);
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
    }
    ExitCode::from(harness::exit_code(&outcome) as u8)
}
