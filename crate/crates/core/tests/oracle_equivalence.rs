//! Pseudo-spectral nonlinear terms against direct sums at N = 8.

mod common;

use nsd::dynamics::pressure_field;
use nsd::initial::random_solenoidal;
use nsd::{Complex64, PhysParams};

use common::{divergence_of_products, grid, project, relative, TOL};

#[test]
fn advection_matches_direct_convolution() {
    let err = common::advection_error(0..4);
    assert!(err <= TOL, "relative error {err:e}");
}

#[test]
fn pressure_matches_direct_sums() {
    let err = common::pressure_error();
    assert!(err <= TOL, "relative error {err:e}");
}

#[test]
fn pressure_closes_the_projection() {
    // grad p = P N - N, checked on the direct sums.
    let g = grid();
    let u = random_solenoidal(&g, 9, 1.5).unwrap();
    let params = PhysParams::new(1.0, 0.0, 4.0).unwrap();
    let n = divergence_of_products(&u);
    let pn = project(&g, &n);
    let grad = pressure_field(&u, &params).gradient();
    let residual: Vec<Vec<Complex64>> = (0..3).map(|c| (0..g.len()).map(|i| pn[c][i] - n[c][i]).collect()).collect();
    let got: Vec<&[Complex64]> = (0..3).map(|c| grad.component(c)).collect();
    let err = relative(&residual, &got);
    assert!(err <= TOL, "relative error {err:e}");
}
