use crate::{Error, Result};

/// Smallest damping exponent for which the difference estimates close.
pub const UNIQUENESS_BETA: f64 = 3.0;
/// Smallest damping exponent of the large-time decay argument.
pub const DECAY_BETA: f64 = 10.0 / 3.0;

/// Viscosity, damping amplitude and damping exponent.
///
/// `alpha = 0` is accepted and recovers the undamped equations; the heat-limit
/// and refinement checks rely on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysParams {
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PhysParams {
    pub fn new(nu: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "nu must be positive, got {nu}"
            )));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "alpha must be nonnegative, got {alpha}"
            )));
        }
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "beta must exceed 1, got {beta}"
            )));
        }
        Ok(PhysParams { nu, alpha, beta })
    }

    /// Unit viscosity.
    pub fn unit_viscosity(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(1.0, alpha, beta)
    }

    pub fn supports_uniqueness(&self) -> bool {
        self.beta > UNIQUENESS_BETA
    }

    pub fn supports_decay(&self) -> bool {
        self.beta >= DECAY_BETA - 1e-12
    }

    /// Human-readable notes on which estimates do not cover these parameters.
    pub fn regime_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.alpha == 0.0 {
            out.push("alpha = 0: undamped equations, stability bounds do not apply".to_string());
        }
        if !self.supports_uniqueness() {
            out.push(format!(
                "beta = {} <= 3: uniqueness and continuity bounds do not apply",
                self.beta
            ));
        }
        if !self.supports_decay() {
            out.push(format!(
                "beta = {} < 10/3: decay argument does not apply",
                self.beta
            ));
        }
        out
    }
}
