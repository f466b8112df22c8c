//! Long-run structural properties of the integrator.

use std::f64::consts::PI;

use nsd::dynamics::{advection, damping, manufactured_forcing, run, Integrator, ManufacturedTarget, RunOptions};
use nsd::initial::{random_solenoidal, shear_mode, taylor_green};
use nsd::spectral::{lp_integral_samples, to_physical};
use nsd::{make_grid, GridSpec, PhysParams, SolverState, StepperConfig};

fn grid(n: usize) -> GridSpec {
    make_grid(n, 2.0 * PI, 2.0 / 3.0).unwrap()
}

#[test]
fn stays_solenoidal_and_truncated_over_many_steps() {
    let g = grid(16);
    let params = PhysParams::new(0.5, 1.0, 4.0).unwrap();
    let integ = Integrator::new(&g, params, StepperConfig::new(1e-3).unwrap());
    let mut worst: f64 = 0.0;
    let mut check = |s: &SolverState| {
        worst = worst.max(s.u.divergence_relative());
        assert_eq!(s.u.max_outside(g.cutoff_radius()), 0.0);
        assert!(s.u.hermitian_defect() <= 1e-14 * s.u.max_abs_coefficient());
        Ok(())
    };
    let start = SolverState::new(random_solenoidal(&g, 4, 4.0).unwrap(), params).unwrap();
    run(start, &integ, RunOptions::new(0.3, 10), &mut [&mut check]).unwrap();
    assert!(worst <= 1e-12, "relative divergence {worst:e}");
}

#[test]
fn advection_is_skew() {
    for n in [8, 16, 32] {
        let g = grid(n);
        let u = random_solenoidal(&g, n as u64, 3.0).unwrap();
        let a = advection(&u);
        let scale = a.l2_norm() * u.l2_norm();
        assert!(a.inner(&u).abs() <= 1e-12 * scale, "n = {n}: <B(u), u> = {:e}", a.inner(&u));
    }
}

#[test]
fn damping_power_matches_quadrature() {
    let g = grid(16);
    let u = random_solenoidal(&g, 8, 2.0).unwrap();
    for beta in [3.5, 4.0, 5.0] {
        let d = damping(&u, 1.5, beta);
        let expect = 1.5 * lp_integral_samples(&to_physical(&u), beta + 1.0).unwrap();
        let got = d.inner(&u);
        assert!(got > 0.0);
        assert!((got - expect).abs() <= 1e-11 * expect, "beta {beta}: {got} vs {expect}");
    }
}

#[test]
fn heat_limit_is_exact_for_every_shell() {
    let g = grid(16);
    let params = PhysParams::new(0.7, 0.0, 4.0).unwrap();
    let integ = Integrator::new(&g, params, StepperConfig::new(1e-2).unwrap());
    let u0 = shear_mode(&g, 1.0).unwrap();
    let end = run(SolverState::new(u0.clone(), params).unwrap(), &integ, RunOptions::new(1.0, u64::MAX), &mut []).unwrap();
    let expect = (-0.7f64).exp() * u0.l2_norm();
    assert!((end.u.l2_norm() - expect).abs() <= 1e-13 * expect);
}

#[test]
fn runs_are_deterministic() {
    let g = grid(16);
    let params = PhysParams::new(1.0, 1.0, 3.5).unwrap();
    let integ = Integrator::new(&g, params, StepperConfig::new(2e-3).unwrap());
    let go = || {
        let start = SolverState::new(random_solenoidal(&g, 12, 2.0).unwrap(), params).unwrap();
        run(start, &integ, RunOptions::new(0.1, u64::MAX), &mut []).unwrap().u
    };
    assert!(go() == go());
}

#[test]
fn energy_never_increases_without_forcing() {
    let g = grid(16);
    let params = PhysParams::new(1.0, 2.0, 4.0).unwrap();
    let integ = Integrator::new(&g, params, StepperConfig::new(1e-3).unwrap());
    let mut last = f64::INFINITY;
    let mut check = |s: &SolverState| {
        let e = s.u.l2_norm_sq();
        assert!(e <= last * (1.0 + 1e-14), "energy rose at t = {}", s.t);
        last = e;
        Ok(())
    };
    let start = SolverState::new(taylor_green(&g, 3.0).unwrap(), params).unwrap();
    run(start, &integ, RunOptions::new(0.2, 5), &mut [&mut check]).unwrap();
}

#[test]
fn manufactured_solution_converges_at_fourth_order() {
    let g = grid(8);
    let params = PhysParams::new(1.0, 1.0, 4.0).unwrap();
    let forcing = manufactured_forcing(ManufacturedTarget::PulsingTaylorGreen { amplitude: 1.0, omega: 8.0 }, &g, params).unwrap();
    let t_end = 0.4;
    let exact = forcing.target(t_end);
    let errors: Vec<f64> = [0.02, 0.01, 0.005]
        .iter()
        .map(|&dt| {
            let integ = Integrator::new(&g, params, StepperConfig::new(dt).unwrap()).with_forcing(&forcing);
            let start = SolverState::new(forcing.target(0.0), params).unwrap();
            let end = run(start, &integ, RunOptions::new(t_end, u64::MAX), &mut []).unwrap();
            (&end.u - &exact).l2_norm() / exact.l2_norm()
        })
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 3.7, "observed order {order} from {errors:?}");
    }
}
