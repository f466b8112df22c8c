use crate::dynamics::SolverState;
use crate::field::SpectralField;
use crate::spectral::sobolev_norm;
use crate::{Error, Result};

/// `u(t) = e^{t Lap} u0 + f(t) + g(t)`, with `f` driven by advection and `g`
/// by damping. The stepper advances all three with the same integrating-factor
/// weights it uses for `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct DuhamelSplit {
    pub heat: SpectralField,
    pub advective: SpectralField,
    pub damping: SpectralField,
}

impl DuhamelSplit {
    pub fn new(u: &SpectralField) -> Self {
        let zero = SpectralField::zeros(*u.grid());
        DuhamelSplit {
            heat: u.clone(),
            advective: zero.clone(),
            damping: zero,
        }
    }

    pub fn advanced(
        &self,
        heat: SpectralField,
        advective: SpectralField,
        damping: SpectralField,
    ) -> Self {
        DuhamelSplit {
            heat,
            advective,
            damping,
        }
    }

    pub fn reconstruct(&self) -> SpectralField {
        let mut u = &self.heat + &self.advective;
        u.axpy(1.0, &self.damping);
        u
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DuhamelNorms {
    pub heat_l2: f64,
    pub f_hminus2: f64,
    pub g_hminus2: f64,
    /// `||heat + f + g - u|| / ||u||` (absolute when `u = 0`).
    pub reconstruction_error: f64,
}

/// Norms of the tracked Duhamel channels of `state`.
pub fn duhamel_split(state: &SolverState) -> Result<DuhamelNorms> {
    let split = state
        .duhamel
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("state does not track the Duhamel split".into()))?;
    let diff = (&split.reconstruct() - &state.u).l2_norm();
    let scale = state.u.l2_norm();
    Ok(DuhamelNorms {
        heat_l2: split.heat.l2_norm(),
        f_hminus2: sobolev_norm(&split.advective, -2.0, false),
        g_hminus2: sobolev_norm(&split.damping, -2.0, false),
        reconstruction_error: if scale > 0.0 { diff / scale } else { diff },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run, Integrator, RunOptions, StepperConfig};
    use crate::grid::make_grid;
    use crate::initial::{shear_mode, taylor_green};
    use crate::PhysParams;
    use std::f64::consts::PI;

    #[test]
    fn starts_as_pure_heat() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let s = SolverState::new(
            taylor_green(&g, 1.0).unwrap(),
            PhysParams::new(1.0, 1.0, 4.0).unwrap(),
        )
        .unwrap()
        .with_duhamel();
        let n = duhamel_split(&s).unwrap();
        assert_eq!(
            (n.f_hminus2, n.g_hminus2, n.reconstruction_error),
            (0.0, 0.0, 0.0)
        );
        assert_eq!(n.heat_l2, s.u.l2_norm());
    }

    #[test]
    fn shear_mode_stays_heat() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let s = SolverState::new(
            shear_mode(&g, 1.0).unwrap(),
            PhysParams::new(1.0, 0.0, 4.0).unwrap(),
        )
        .unwrap()
        .with_duhamel();
        let integ = Integrator::new(&g, s.params, StepperConfig::new(0.01).unwrap());
        let end = run(s, &integ, RunOptions::new(0.5, 10), &mut []).unwrap();
        let n = duhamel_split(&end).unwrap();
        assert!(n.f_hminus2 < 1e-15 && n.g_hminus2 == 0.0);
        assert!((n.heat_l2 - end.u.l2_norm()).abs() < 1e-14);
    }

    #[test]
    fn channels_reconstruct_state() {
        let g = make_grid(16, 2.0 * PI, 2.0 / 3.0).unwrap();
        let s = SolverState::new(
            taylor_green(&g, 2.0).unwrap(),
            PhysParams::new(1.0, 1.0, 4.0).unwrap(),
        )
        .unwrap()
        .with_duhamel();
        let integ = Integrator::new(&g, s.params, StepperConfig::new(1e-3).unwrap());
        let end = run(s, &integ, RunOptions::new(0.2, 50), &mut []).unwrap();
        let n = duhamel_split(&end).unwrap();
        assert!(
            n.reconstruction_error < 1e-4,
            "error {}",
            n.reconstruction_error
        );
        assert!(n.f_hminus2 > 0.0 && n.g_hminus2 > 0.0);
    }

    #[test]
    fn untracked_state_is_an_error() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let s = SolverState::new(
            taylor_green(&g, 1.0).unwrap(),
            PhysParams::new(1.0, 1.0, 4.0).unwrap(),
        )
        .unwrap();
        assert!(duhamel_split(&s).is_err());
    }
}
