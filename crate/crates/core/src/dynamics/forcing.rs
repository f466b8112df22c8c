//! Additive forcing and manufactured solutions.

use crate::field::SpectralField;
use crate::initial::{shear_mode, taylor_green};
use crate::params::PhysParams;
use crate::{Error, GridSpec, Result};

use super::nonlinear::Nonlinear;

/// Divergence-free forcing `F(t)` added to the tendency at every stage time.
pub trait Forcing: Sync {
    fn at(&self, t: f64) -> SpectralField;
}

/// Closed-form target families for manufactured-solution runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ManufacturedTarget {
    /// `A exp(-nu |xi|^2 t) (sin(2 pi y / L), 0, 0)`: the free heat solution.
    DecayingShear { amplitude: f64 },
    /// `A (1 + sin(omega t) / 2) TG(x)` with `TG` the Taylor-Green field.
    PulsingTaylorGreen { amplitude: f64, omega: f64 },
}

impl ManufacturedTarget {
    fn shape(&self, grid: &GridSpec) -> Result<SpectralField> {
        match *self {
            ManufacturedTarget::DecayingShear { .. } => shear_mode(grid, 1.0),
            ManufacturedTarget::PulsingTaylorGreen { .. } => taylor_green(grid, 1.0),
        }
    }

    /// Time profile `a(t)` and its derivative.
    fn profile(&self, nu: f64, grid: &GridSpec, t: f64) -> (f64, f64) {
        match *self {
            ManufacturedTarget::DecayingShear { amplitude } => {
                let rate = nu * grid.fundamental().powi(2);
                let a = amplitude * (-rate * t).exp();
                (a, -rate * a)
            }
            ManufacturedTarget::PulsingTaylorGreen { amplitude, omega } => (
                amplitude * (1.0 + 0.5 * (omega * t).sin()),
                amplitude * 0.5 * omega * (omega * t).cos(),
            ),
        }
    }
}

/// Forcing that makes a target field an exact solution of the discrete system.
pub struct ManufacturedForcing {
    target: ManufacturedTarget,
    params: PhysParams,
    shape: SpectralField,
    viscous_shape: SpectralField,
    nonlinear: Nonlinear,
}

/// Builds `F = d_t u* - nu Lap u* + P J div(u* (x) u*) + alpha P J |u*|^(beta-1) u*`.
pub fn manufactured_forcing(
    target: ManufacturedTarget,
    grid: &GridSpec,
    params: PhysParams,
) -> Result<ManufacturedForcing> {
    let shape = target.shape(grid).map_err(|_| {
        Error::InvalidArgument(
            "manufactured target is not band-limited within the grid cutoff".into(),
        )
    })?;
    let nonlinear = Nonlinear::new(grid);
    let mut viscous_shape = shape.clone();
    let tables = nonlinear.tables();
    viscous_shape.scale_modes(|idx| params.nu * tables.xi_sq[idx]);
    Ok(ManufacturedForcing {
        target,
        params,
        shape,
        viscous_shape,
        nonlinear,
    })
}

impl ManufacturedForcing {
    /// The target field at time `t`.
    pub fn target(&self, t: f64) -> SpectralField {
        let (a, _) = self.target.profile(self.params.nu, self.shape.grid(), t);
        &self.shape * a
    }
}

impl Forcing for ManufacturedForcing {
    fn at(&self, t: f64) -> SpectralField {
        let (a, da) = self.target.profile(self.params.nu, self.shape.grid(), t);
        let mut f = &self.shape * da;
        f.axpy(a, &self.viscous_shape);
        if a != 0.0 {
            let u = &self.shape * a;
            let eval = self.nonlinear.evaluate(&u, &self.params);
            f.axpy(1.0, &eval.advection);
            f.axpy(1.0, &eval.damping);
        }
        f.mark_solenoidal(true);
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn free_heat_target_needs_no_forcing() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let p = PhysParams::new(1.0, 0.0, 4.0).unwrap();
        let f = manufactured_forcing(ManufacturedTarget::DecayingShear { amplitude: 1.3 }, &g, p)
            .unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert!(f.at(t).max_abs_coefficient() < 1e-15);
        }
    }

    #[test]
    fn zero_target_gives_zero_forcing() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let p = PhysParams::new(1.0, 1.0, 4.0).unwrap();
        let target = ManufacturedTarget::PulsingTaylorGreen {
            amplitude: 0.0,
            omega: 3.0,
        };
        let f = manufactured_forcing(target, &g, p).unwrap();
        assert_eq!(f.at(0.4).l2_norm(), 0.0);
    }

    #[test]
    fn rejects_unresolved_target() {
        let g = make_grid(4, 2.0 * PI, 2.0 / 3.0).unwrap();
        let p = PhysParams::new(1.0, 1.0, 4.0).unwrap();
        let target = ManufacturedTarget::PulsingTaylorGreen {
            amplitude: 1.0,
            omega: 1.0,
        };
        assert!(manufactured_forcing(target, &g, p).is_err());
    }
}
