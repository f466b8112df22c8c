use std::sync::Arc;

use crate::field::{ScalarSpectral, SpectralField};
use crate::grid::{GridSpec, WaveTables};
use crate::params::PhysParams;
use crate::spectral::{forward_real, inverse_real, project_in_place, truncate_in_place};
use crate::Complex64;

use super::SolverState;

/// Everything one right-hand-side evaluation produces.
#[derive(Clone, Debug)]
pub struct StageEval {
    /// `P J div(u (x) u)`.
    pub advection: SpectralField,
    /// `P J (alpha |u|^(beta-1) u)`.
    pub damping: SpectralField,
    /// `2 nu ||grad u||^2`.
    pub viscous_rate: f64,
    /// `2 alpha int |u|^(beta+1)` by collocation quadrature.
    pub damping_rate: f64,
    /// `max |u|` over collocation points.
    pub linf: f64,
}

/// Nonlinear-term evaluator with the per-grid wavenumber tables.
#[derive(Clone, Debug)]
pub struct Nonlinear {
    grid: GridSpec,
    tables: Arc<WaveTables>,
}

/// Which pieces of the nonlinearity to produce.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Finish {
    Projected,
    Unprojected,
}

impl Nonlinear {
    pub fn new(grid: &GridSpec) -> Self {
        Nonlinear {
            grid: *grid,
            tables: grid.tables(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn tables(&self) -> &WaveTables {
        &self.tables
    }

    pub fn evaluate(&self, u: &SpectralField, params: &PhysParams) -> StageEval {
        self.evaluate_with(u, params, Finish::Projected)
    }

    fn evaluate_with(&self, u: &SpectralField, params: &PhysParams, finish: Finish) -> StageEval {
        let grid = &self.grid;
        let len = grid.len();
        let c = u.components();
        let phys = inverse_real(grid, &[&c[0], &c[1], &c[2]]);
        let (u1, u2, u3) = (&phys[0], &phys[1], &phys[2]);

        let mut products: Vec<Vec<f64>> = vec![vec![0.0; len]; 6];
        let with_damping = params.alpha > 0.0;
        let mut damp_phys: Vec<Vec<f64>> = if with_damping {
            vec![vec![0.0; len]; 3]
        } else {
            Vec::new()
        };
        let half_power = (params.beta - 1.0) / 2.0;
        let mut linf_sq: f64 = 0.0;
        let mut damping_sum = 0.0;
        for x in 0..len {
            let (a, b, d) = (u1[x], u2[x], u3[x]);
            products[0][x] = a * a;
            products[1][x] = a * b;
            products[2][x] = a * d;
            products[3][x] = b * b;
            products[4][x] = b * d;
            products[5][x] = d * d;
            let mag_sq = a * a + b * b + d * d;
            linf_sq = linf_sq.max(mag_sq);
            if with_damping && mag_sq > 0.0 {
                let w = params.alpha * mag_sq.powf(half_power);
                damp_phys[0][x] = w * a;
                damp_phys[1][x] = w * b;
                damp_phys[2][x] = w * d;
                damping_sum += w * mag_sq;
            }
        }

        let mut real_fields: Vec<&[f64]> = products.iter().map(|v| v.as_slice()).collect();
        real_fields.extend(damp_phys.iter().map(|v| v.as_slice()));
        let spectra = forward_real(grid, &real_fields);

        // (i, j) -> slot of u_i u_j among the six products.
        const SLOT: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
        let xi = &self.tables.xi;
        let mut adv = [
            vec![Complex64::new(0.0, 0.0); len],
            vec![Complex64::new(0.0, 0.0); len],
            vec![Complex64::new(0.0, 0.0); len],
        ];
        for idx in 0..len {
            if !self.tables.inside[idx] {
                continue;
            }
            for i in 0..3 {
                let s = spectra[SLOT[i][0]][idx] * xi[0][idx]
                    + spectra[SLOT[i][1]][idx] * xi[1][idx]
                    + spectra[SLOT[i][2]][idx] * xi[2][idx];
                adv[i][idx] = Complex64::new(-s.im, s.re);
            }
        }
        let mut advection = SpectralField::from_components(*grid, adv).expect("grid-sized");
        let mut damping = if with_damping {
            let mut it = spectra.into_iter().skip(6);
            SpectralField::from_components(
                *grid,
                [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()],
            )
            .expect("grid-sized")
        } else {
            SpectralField::zeros(*grid)
        };
        truncate_in_place(&mut damping, &self.tables.inside);
        // The damping has a nonzero box average in general; the evolved
        // space is zero-mean, and dropping it leaves <damping, u> unchanged.
        for c in 0..3 {
            damping.component_mut(c)[0] = Complex64::new(0.0, 0.0);
        }
        if finish == Finish::Projected {
            project_in_place(&mut advection, xi);
            project_in_place(&mut damping, xi);
        } else {
            advection.mark_solenoidal(false);
            damping.mark_solenoidal(false);
        }

        let mut grad = 0.0;
        for idx in 0..len {
            let k2 = self.tables.xi_sq[idx];
            if k2 > 0.0 {
                grad += k2 * (c[0][idx].norm_sqr() + c[1][idx].norm_sqr() + c[2][idx].norm_sqr());
            }
        }

        StageEval {
            advection,
            damping,
            viscous_rate: 2.0 * params.nu * grad * grid.volume(),
            damping_rate: 2.0 * damping_sum * grid.cell_volume(),
            linf: linf_sq.sqrt(),
        }
    }
}

/// `P J div(u (x) u)`: products on the collocation grid, divergence in
/// Fourier space, then cutoff and projection.
pub fn advection(u: &SpectralField) -> SpectralField {
    let params = PhysParams {
        nu: 1.0,
        alpha: 0.0,
        beta: 2.0,
    };
    Nonlinear::new(u.grid()).evaluate(u, &params).advection
}

/// `P J (alpha |u|^(beta-1) u)` with `|u|^(beta-1) = 0` where `u = 0`.
pub fn damping(u: &SpectralField, alpha: f64, beta: f64) -> SpectralField {
    let params = PhysParams {
        nu: 1.0,
        alpha,
        beta,
    };
    Nonlinear::new(u.grid()).evaluate(u, &params).damping
}

/// `J div(u (x) u) + alpha J (|u|^(beta-1) u)`, before projection.
pub fn nonlinear_terms(u: &SpectralField, params: &PhysParams) -> SpectralField {
    let eval = Nonlinear::new(u.grid()).evaluate_with(u, params, Finish::Unprojected);
    let mut total = eval.advection;
    total.axpy(1.0, &eval.damping);
    total
}

/// Right-hand side split by mechanism; the viscous part is kept apart so the
/// stepper can integrate it exactly.
#[derive(Clone, Debug)]
pub struct Tendency {
    pub advective: SpectralField,
    pub damping: SpectralField,
    pub viscous: SpectralField,
}

impl Tendency {
    pub fn total(&self) -> SpectralField {
        let mut out = &self.advective + &self.damping;
        out.axpy(1.0, &self.viscous);
        out
    }
}

pub fn tendency(state: &SolverState) -> Tendency {
    let eval = Nonlinear::new(state.grid()).evaluate(&state.u, &state.params);
    let nu = state.params.nu;
    let mut viscous = state.u.clone();
    let tables = state.grid().tables();
    viscous.scale_modes(|idx| -nu * tables.xi_sq[idx]);
    viscous.mark_solenoidal(state.u.is_solenoidal());
    Tendency {
        advective: -&eval.advection,
        damping: -&eval.damping,
        viscous,
    }
}

/// Pressure of the truncated system, `p = (-Lap)^{-1} div N(u)` with `N` the
/// truncated nonlinear terms; zero mean.
///
/// It satisfies `P N - grad p = N`.
pub fn pressure_field(u: &SpectralField, params: &PhysParams) -> ScalarSpectral {
    let nl = nonlinear_terms(u, params);
    let grid = *u.grid();
    let tables = grid.tables();
    let mut p = ScalarSpectral::zeros(grid);
    let c = nl.components();
    for idx in 0..grid.len() {
        let k2 = tables.xi_sq[idx];
        if k2 == 0.0 {
            continue;
        }
        let dot = c[0][idx] * tables.xi[0][idx]
            + c[1][idx] * tables.xi[1][idx]
            + c[2][idx] * tables.xi[2][idx];
        // i xi . N / |xi|^2
        p.coeffs[idx] = Complex64::new(-dot.im, dot.re) / k2;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::initial::{random_solenoidal, shear_mode, taylor_green};
    use crate::spectral::{leray_project, to_physical};
    use std::f64::consts::PI;

    #[test]
    fn zero_field_gives_zero_terms() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let p = PhysParams::new(1.0, 1.0, 4.0).unwrap();
        let e = Nonlinear::new(&g).evaluate(&SpectralField::zeros(g), &p);
        assert_eq!(e.advection.l2_norm(), 0.0);
        assert_eq!(e.damping.l2_norm(), 0.0);
        assert_eq!(e.viscous_rate, 0.0);
        assert_eq!(pressure_field(&SpectralField::zeros(g), &p).l2_norm(), 0.0);
    }

    #[test]
    fn shear_mode_has_no_advection() {
        let g = make_grid(16, 2.0 * PI, 2.0 / 3.0).unwrap();
        let u = shear_mode(&g, 2.0).unwrap();
        assert!(advection(&u).l2_norm() < 1e-14);
        let state = SolverState::new(u.clone(), PhysParams::new(1.0, 0.0, 4.0).unwrap()).unwrap();
        let t = tendency(&state);
        let heat = &u * -1.0;
        assert!((&t.total() - &heat).l2_norm() < 1e-14);
    }

    #[test]
    fn pointwise_cubic_damping() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let u = shear_mode(&g, 0.8).unwrap();
        let phys = to_physical(&u);
        let e = Nonlinear::new(&g).evaluate(&u, &PhysParams::new(1.0, 1.0, 3.0).unwrap());
        // For u = (c, 0, 0) with beta = 3 the integrand is c^4.
        let expected: f64 =
            phys.component(0).iter().map(|c| c.powi(4)).sum::<f64>() * g.cell_volume();
        assert!((e.damping_rate - 2.0 * expected).abs() < 1e-13 * expected);
    }

    #[test]
    fn damping_is_odd() {
        let g = make_grid(16, 2.0 * PI, 2.0 / 3.0).unwrap();
        let u = random_solenoidal(&g, 3, 5.0).unwrap();
        let d = damping(&u, 1.3, 10.0 / 3.0);
        let dm = damping(&-&u, 1.3, 10.0 / 3.0);
        assert_eq!(dm, -&d);
    }

    #[test]
    fn helmholtz_identity_for_pressure() {
        let g = make_grid(16, 2.0 * PI, 2.0 / 3.0).unwrap();
        let params = PhysParams::new(1.0, 0.7, 4.0).unwrap();
        for seed in 0..5 {
            let u = random_solenoidal(&g, seed, 3.0).unwrap();
            let nl = nonlinear_terms(&u, &params);
            let p = pressure_field(&u, &params);
            let rebuilt = &leray_project(&nl) - &p.gradient();
            assert!((&rebuilt - &nl).l2_norm() <= 1e-12 * nl.l2_norm());
        }
    }

    #[test]
    fn outputs_are_solenoidal_and_truncated() {
        let g = make_grid(16, 2.0 * PI, 2.0 / 3.0).unwrap();
        let u = taylor_green(&g, 1.0).unwrap();
        let e = Nonlinear::new(&g).evaluate(&u, &PhysParams::new(1.0, 1.0, 4.0).unwrap());
        for f in [&e.advection, &e.damping] {
            assert!(f.check_invariants(1e-12).is_ok());
            assert!(f.divergence_relative() < 1e-14);
        }
    }
}
