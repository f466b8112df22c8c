use std::fmt;
use std::fmt::Write as _;
use std::fs;

use crate::dynamics::{Integrator, SolverState, StepperConfig};
use crate::initial::random_solenoidal;
use crate::oracles::gronwall_constant;
use crate::{Error, Result};

use super::{initial_state, pass_word, prepare_output, whole_steps, write_report, Experiment, ExperimentConfig, Report, BOUND_SLACK};

/// Seed offset of the perturbation direction relative to `ic.seed`.
const PERTURBATION_SEED: u64 = 0x7715;

/// Largest accepted `||w(t)|| / (||w0|| e^{Ct})`.
pub const RATIO_LIMIT: f64 = 1.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwinSample {
    pub t: f64,
    pub w_sq: f64,
    /// `2 nu int_0^t ||grad w||^2`, trapezoidal at the sample cadence.
    pub grad_integral: f64,
    /// `1.1 ||w0||^2 e^{2Ct}`.
    pub bound: f64,
    /// `||w(t)|| / (||w0|| e^{Ct})`, zero when `w0 = 0`.
    pub ratio: f64,
}

impl TwinSample {
    pub fn lhs(&self) -> f64 {
        self.w_sq + self.grad_integral
    }

    pub fn holds(&self) -> bool {
        self.lhs() <= self.bound
    }
}

pub struct TwinReport {
    pub delta: f64,
    pub constant: f64,
    pub samples: Vec<TwinSample>,
    pub first_violation: Option<f64>,
    pub max_ratio: f64,
    /// Whether the two trajectories agreed bit for bit (always checked; only
    /// required when `delta = 0`).
    pub bitwise_identical: bool,
}

impl Report for TwinReport {
    fn passed(&self) -> bool {
        self.first_violation.is_none() && self.max_ratio <= RATIO_LIMIT && (self.delta != 0.0 || self.bitwise_identical)
    }
}

impl fmt::Display for TwinReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "twin: delta = {:e}, C = {}, {} samples", self.delta, self.constant, self.samples.len())?;
        writeln!(
            f,
            "bound ||w||^2 + 2 int ||grad w||^2 <= {BOUND_SLACK} ||w0||^2 e^(2Ct): {}",
            match self.first_violation {
                None => "holds at every sample".to_string(),
                Some(t) => format!("VIOLATED first at t = {t}"),
            }
        )?;
        writeln!(f, "max ||w||/(||w0|| e^(Ct)) = {:.4e} (limit {RATIO_LIMIT}): {}", self.max_ratio, pass_word(self.max_ratio <= RATIO_LIMIT))?;
        if let Some(last) = self.samples.last() {
            write!(f, "final: t = {}, ||w||^2 = {:.4e}", last.t, last.w_sq)?;
            if last.bound > 0.0 {
                write!(f, ", lhs/bound = {:.4e}", last.lhs() / last.bound)?;
            }
            writeln!(f)?;
        }
        write!(f, "trajectories bitwise identical: {}", self.bitwise_identical)
    }
}

/// Runs `u0` and `u0 + delta p` (with `p` a seeded unit solenoidal field) in
/// lockstep and checks the Gronwall bound on their difference.
pub fn twin_experiment(cfg: &ExperimentConfig, delta: f64) -> Result<TwinReport> {
    cfg.check_for(Experiment::Twin)?;
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be nonnegative, got {delta}")));
    }
    let dir = &cfg.output_dir;
    prepare_output(dir)?;
    let c = gronwall_constant(cfg.phys.alpha, cfg.phys.beta)?;
    let base = initial_state(cfg)?;
    let seed = match cfg.ic {
        super::InitialCondition::RandomSolenoidal { seed, .. } => seed,
        _ => 0,
    };
    let direction = random_solenoidal(&cfg.grid, seed ^ PERTURBATION_SEED, 1.0)?;
    // Both terms are already in the evolved space, so the sum needs no
    // re-projection and delta = 0 reproduces u0 exactly.
    let mut perturbed_u = base.u.clone();
    perturbed_u.axpy(delta, &direction);
    let mut a = base.clone();
    let mut b = SolverState::at_time(perturbed_u, cfg.phys, base.t)?;

    let integ = Integrator::new(&cfg.grid, cfg.phys, StepperConfig::new(cfg.time.dt)?);
    let n = whole_steps(cfg.time.t_end, cfg.time.dt, "time.t_end")?;
    let every = cfg.time.output_every;
    let t0 = base.t;

    let w0_sq = (&b.u - &a.u).l2_norm_sq();
    let nu = cfg.phys.nu;
    let mut samples = Vec::new();
    let mut identical_all = a.u == b.u;
    let mut last_grad = 0.0;
    let mut grad_integral = 0.0;
    let mut last_t = t0;
    let mut sample = |a: &SolverState, b: &SolverState, samples: &mut Vec<TwinSample>| {
        let w = &b.u - &a.u;
        let t = a.t - t0;
        let grad = 2.0 * nu * w.grad_norm_sq();
        if !samples.is_empty() {
            grad_integral += 0.5 * (a.t - last_t) * (last_grad + grad);
        }
        last_grad = grad;
        last_t = a.t;
        let growth = (c * t).exp();
        let w_sq = w.l2_norm_sq();
        samples.push(TwinSample {
            t: a.t,
            w_sq,
            grad_integral,
            bound: BOUND_SLACK * w0_sq * growth * growth,
            ratio: if w0_sq > 0.0 { (w_sq / w0_sq).sqrt() / growth } else { 0.0 },
        });
    };
    sample(&a, &b, &mut samples);
    for k in 1..=n {
        let (na, nb) = rayon::join(|| integ.advance(&a), || integ.advance(&b));
        a = na?;
        b = nb?;
        a.t = t0 + k as f64 * cfg.time.dt;
        b.t = a.t;
        identical_all &= a.u == b.u;
        if k % every == 0 || k == n {
            sample(&a, &b, &mut samples);
        }
    }

    let report = TwinReport {
        delta,
        constant: c,
        first_violation: samples.iter().find(|s| !s.holds()).map(|s| s.t),
        max_ratio: samples.iter().map(|s| s.ratio).fold(0.0, f64::max),
        bitwise_identical: identical_all,
        samples,
    };
    let mut csv = String::from("t,w_sq,grad_integral,bound,ratio\n");
    for s in &report.samples {
        let _ = writeln!(csv, "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}", s.t, s.w_sq, s.grad_integral, s.bound, s.ratio);
    }
    fs::write(dir.join("twin.csv"), csv)?;
    write_report(dir, cfg, &report)?;
    Ok(report)
}
