use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::grid::make_grid;
use crate::params::{PhysParams, DECAY_BETA, UNIQUENESS_BETA};
use crate::{Error, GridSpec, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Run,
    Twin,
    Continuity,
    Decay,
    Refine,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Run => "run",
            Experiment::Twin => "twin",
            Experiment::Continuity => "continuity",
            Experiment::Decay => "decay",
            Experiment::Refine => "refine",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "run" => Experiment::Run,
            "twin" => Experiment::Twin,
            "continuity" => Experiment::Continuity,
            "decay" => Experiment::Decay,
            "refine" => Experiment::Refine,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    TaylorGreen { amplitude: f64 },
    RandomSolenoidal { seed: u64, amplitude: f64 },
    /// `A sin(2 pi y / L) e_x`, the heat-equation test mode.
    Shear { amplitude: f64 },
    Checkpoint { path: PathBuf },
}

impl InitialCondition {
    pub fn kind(&self) -> &'static str {
        match self {
            InitialCondition::TaylorGreen { .. } => "taylor-green",
            InitialCondition::RandomSolenoidal { .. } => "random-solenoidal",
            InitialCondition::Shear { .. } => "shear",
            InitialCondition::Checkpoint { .. } => "checkpoint",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeConfig {
    pub dt: f64,
    pub t_end: f64,
    pub output_every: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    /// As given; recovering it from `grid` would not round-trip exactly.
    pub cutoff_fraction: f64,
    pub phys: PhysParams,
    pub time: TimeConfig,
    pub ic: InitialCondition,
    pub output_dir: PathBuf,
    pub experiment: Option<Experiment>,
}

fn config_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config { key: key.to_string(), message: message.into() }
}

struct Reader<'a> {
    root: &'a Table,
}

impl<'a> Reader<'a> {
    fn lookup(&self, key: &str) -> Option<&'a Value> {
        let mut parts = key.split('.');
        let mut v = self.root.get(parts.next()?)?;
        for p in parts {
            v = v.as_table()?.get(p)?;
        }
        Some(v)
    }

    fn required(&self, key: &str) -> Result<&'a Value> {
        self.lookup(key).ok_or_else(|| config_err(key, "missing"))
    }

    fn float(&self, key: &str) -> Result<f64> {
        match self.required(key)? {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            other => Err(config_err(key, format!("expected a number, found {}", other.type_str()))),
        }
    }

    fn float_or(&self, key: &str, default: f64) -> Result<f64> {
        if self.lookup(key).is_some() {
            self.float(key)
        } else {
            Ok(default)
        }
    }

    fn uint(&self, key: &str) -> Result<u64> {
        match self.required(key)? {
            Value::Integer(i) if *i >= 0 => Ok(*i as u64),
            Value::Integer(i) => Err(config_err(key, format!("must be nonnegative, got {i}"))),
            other => Err(config_err(key, format!("expected an integer, found {}", other.type_str()))),
        }
    }

    fn string(&self, key: &str) -> Result<&'a str> {
        match self.required(key)? {
            Value::String(s) => Ok(s),
            other => Err(config_err(key, format!("expected a string, found {}", other.type_str()))),
        }
    }

    /// A number, or a string such as `"8pi"`, `"2*pi"` or `"pi"`.
    fn length(&self, key: &str) -> Result<f64> {
        match self.required(key)? {
            Value::String(s) => parse_pi_multiple(s).ok_or_else(|| config_err(key, format!("cannot parse `{s}`"))),
            _ => self.float(key),
        }
    }
}

fn parse_pi_multiple(s: &str) -> Option<f64> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    match t.strip_suffix("pi") {
        Some("") => Some(PI),
        Some(coef) => coef.trim_end_matches('*').parse::<f64>().ok().map(|c| c * PI),
        None => t.parse().ok(),
    }
}

/// Parses and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| config_err("<file>", format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| config_err("<syntax>", e.message().to_string()))?;
    let r = Reader { root: &root };

    let experiment = match r.lookup("experiment") {
        None => None,
        Some(_) => {
            let s = r.string("experiment")?;
            Some(Experiment::parse(s).ok_or_else(|| config_err("experiment", format!("unknown experiment `{s}`")))?)
        }
    };

    let n_modes = r.uint("grid.n_modes")? as usize;
    let box_length = r.length("grid.box_length")?;
    let fraction = r.float_or("grid.cutoff_fraction", 2.0 / 3.0)?;
    let grid = make_grid(n_modes, box_length, fraction).map_err(|e| config_err("grid", e.to_string()))?;

    let nu = r.float("phys.nu")?;
    let alpha = r.float("phys.alpha")?;
    let beta = r.float("phys.beta")?;
    let phys = PhysParams::new(nu, alpha, beta).map_err(|e| config_err("phys", e.to_string()))?;

    let dt = r.float("time.dt")?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(config_err("time.dt", format!("must be positive, got {dt}")));
    }
    let t_end = r.float("time.t_end")?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(config_err("time.t_end", format!("must be nonnegative, got {t_end}")));
    }
    let output_every = if r.lookup("time.output_every").is_some() { r.uint("time.output_every")? } else { 1 };
    if output_every == 0 {
        return Err(config_err("time.output_every", "must be at least 1"));
    }

    let ic = match r.string("ic.kind")? {
        "taylor-green" => InitialCondition::TaylorGreen { amplitude: r.float("ic.amplitude")? },
        "random-solenoidal" => {
            InitialCondition::RandomSolenoidal { seed: r.uint("ic.seed")?, amplitude: r.float("ic.amplitude")? }
        }
        "shear" => InitialCondition::Shear { amplitude: r.float("ic.amplitude")? },
        "checkpoint" => InitialCondition::Checkpoint { path: PathBuf::from(r.string("ic.path")?) },
        other => return Err(config_err("ic.kind", format!("unknown initial condition `{other}`"))),
    };

    let output_dir = match r.lookup("output.directory") {
        Some(_) => PathBuf::from(r.string("output.directory")?),
        None => PathBuf::from("out"),
    };

    let cfg = ExperimentConfig { grid, cutoff_fraction: fraction, phys, time: TimeConfig { dt, t_end, output_every }, ic, output_dir, experiment };
    if let Some(e) = experiment {
        cfg.check_for(e)?;
    }
    Ok(cfg)
}

impl ExperimentConfig {
    /// Parameter requirements of each experiment.
    pub fn check_for(&self, experiment: Experiment) -> Result<()> {
        match experiment {
            Experiment::Twin | Experiment::Continuity if self.phys.beta <= UNIQUENESS_BETA => {
                Err(config_err("phys.beta", "uniqueness requires beta > 3"))
            }
            Experiment::Twin | Experiment::Continuity if self.phys.alpha <= 0.0 => {
                Err(config_err("phys.alpha", "the uniqueness bound requires alpha > 0"))
            }
            Experiment::Twin | Experiment::Continuity if self.phys.nu != 1.0 => {
                Err(config_err("phys.nu", "the uniqueness bound is stated for nu = 1"))
            }
            Experiment::Decay if self.phys.beta < DECAY_BETA - 1e-12 => {
                Err(config_err("phys.beta", "decay requires beta >= 10/3"))
            }
            Experiment::Decay if self.grid.box_length() <= 2.0 * PI => {
                Err(config_err("grid.box_length", "decay requires box_length > 2 pi so that |xi| < 1 is populated"))
            }
            _ => Ok(()),
        }
    }

    /// Canonical TOML echo with every value explicit.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        if let Some(e) = self.experiment {
            let _ = writeln!(s, "experiment = \"{}\"\n", e.name());
        }
        let g = &self.grid;
        let _ = writeln!(s, "[grid]");
        let _ = writeln!(s, "n_modes = {}", g.n_modes());
        let _ = writeln!(s, "box_length = {:?}", g.box_length());
        let _ = writeln!(s, "cutoff_fraction = {:?}\n", self.cutoff_fraction);
        let p = &self.phys;
        let _ = writeln!(s, "[phys]\nnu = {:?}\nalpha = {:?}\nbeta = {:?}\n", p.nu, p.alpha, p.beta);
        let t = &self.time;
        let _ = writeln!(s, "[time]\ndt = {:?}\nt_end = {:?}\noutput_every = {}\n", t.dt, t.t_end, t.output_every);
        let _ = writeln!(s, "[ic]\nkind = \"{}\"", self.ic.kind());
        match &self.ic {
            InitialCondition::TaylorGreen { amplitude } | InitialCondition::Shear { amplitude } => {
                let _ = writeln!(s, "amplitude = {amplitude:?}");
            }
            InitialCondition::RandomSolenoidal { seed, amplitude } => {
                let _ = writeln!(s, "seed = {seed}\namplitude = {amplitude:?}");
            }
            InitialCondition::Checkpoint { path } => {
                let _ = writeln!(s, "path = {:?}", path.display().to_string());
            }
        }
        let _ = writeln!(s, "\n[output]\ndirectory = {:?}", self.output_dir.display().to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VALID: &str = r#"
experiment = "twin"
[grid]
n_modes = 16
box_length = "2pi"
cutoff_fraction = 0.6
[phys]
nu = 1.0
alpha = 1
beta = 4.0
[time]
dt = 1e-3
t_end = 2.0
output_every = 10
[ic]
kind = "random-solenoidal"
seed = 7
amplitude = 1.0
[output]
directory = "out/twin"
"#;

    fn key_of(err: Error) -> String {
        match err {
            Error::Config { key, .. } => key,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn canonical_echo_round_trips() {
        let cfg = parse_config(VALID).unwrap();
        assert_eq!(cfg.grid.n_modes(), 16);
        assert!((cfg.grid.box_length() - 2.0 * PI).abs() < 1e-15);
        assert_eq!(cfg.ic, InitialCondition::RandomSolenoidal { seed: 7, amplitude: 1.0 });
        let again = parse_config(&cfg.canonical()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.canonical(), cfg.canonical());
    }

    #[test]
    fn twin_needs_beta_above_three() {
        let text = VALID.replace("beta = 4.0", "beta = 3");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("uniqueness requires beta > 3"), "{err}");
    }

    #[test]
    fn errors_name_the_key() {
        assert_eq!(key_of(parse_config(&VALID.replace("dt = 1e-3", "dt = 0.0")).unwrap_err()), "time.dt");
        assert_eq!(key_of(parse_config(&VALID.replace("dt = 1e-3", "dt = -1.0")).unwrap_err()), "time.dt");
        assert_eq!(key_of(parse_config(&VALID.replace("nu = 1.0\n", "")).unwrap_err()), "phys.nu");
        assert_eq!(key_of(parse_config(&VALID.replace("n_modes = 16", "n_modes = \"16\"")).unwrap_err()), "grid.n_modes");
        assert_eq!(key_of(parse_config(&VALID.replace("seed = 7\n", "")).unwrap_err()), "ic.seed");
        assert_eq!(key_of(parse_config(&VALID.replace("random-solenoidal", "vortex")).unwrap_err()), "ic.kind");
        assert_eq!(key_of(parse_config(&VALID.replace("n_modes = 16", "n_modes = 15")).unwrap_err()), "grid");
        assert_eq!(key_of(parse_config("grid = [").unwrap_err()), "<syntax>");
    }

    #[test]
    fn box_length_forms() {
        assert_eq!(parse_pi_multiple("8pi"), Some(8.0 * PI));
        assert_eq!(parse_pi_multiple("2*pi"), Some(2.0 * PI));
        assert_eq!(parse_pi_multiple("pi"), Some(PI));
        assert_eq!(parse_pi_multiple("3.5"), Some(3.5));
        assert_eq!(parse_pi_multiple("tau"), None);
    }

    #[test]
    fn decay_checks_box_and_beta() {
        let text = VALID.replace("experiment = \"twin\"", "experiment = \"decay\"");
        assert_eq!(key_of(parse_config(&text).unwrap_err()), "grid.box_length");
        let text = text.replace("\"2pi\"", "\"8pi\"").replace("beta = 4.0", "beta = 3.2");
        assert_eq!(key_of(parse_config(&text).unwrap_err()), "phys.beta");
    }
}
