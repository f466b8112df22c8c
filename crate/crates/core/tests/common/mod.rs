//! Direct-summation references for the nonlinear terms at N = 8, where the
//! quadratic term is alias-free and every sum is cheap.

#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use nsd::dynamics::{advection, pressure_field};
use nsd::initial::random_solenoidal;
use nsd::{make_grid, Complex64, GridSpec, PhysParams, SpectralField};

pub const TOL: f64 = 1e-10;
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn grid() -> GridSpec {
    make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap()
}

fn inside(g: &GridSpec, idx: usize) -> bool {
    let xi = g.xi_of(idx);
    GridSpec::in_ball(xi.iter().map(|x| x * x).sum(), g.cutoff_radius())
}

/// Occupied modes of `u` as `(mode, xi, coefficients)`.
fn support(u: &SpectralField) -> Vec<([i64; 3], [f64; 3], [Complex64; 3])> {
    let g = u.grid();
    (0..g.len())
        .filter(|&idx| (0..3).any(|c| u.component(c)[idx] != Complex64::new(0.0, 0.0)))
        .map(|idx| (g.mode_of(idx), g.xi_of(idx), [0, 1, 2].map(|c| u.component(c)[idx])))
        .collect()
}

/// `J div(u (x) u)` by explicit convolution over pairs of modes.
pub fn divergence_of_products(u: &SpectralField) -> [Vec<Complex64>; 3] {
    let g = *u.grid();
    let modes = support(u);
    let mut prod = vec![[[Complex64::new(0.0, 0.0); 3]; 3]; g.len()];
    for (mp, _, a) in &modes {
        for (mq, _, b) in &modes {
            let k = [mp[0] + mq[0], mp[1] + mq[1], mp[2] + mq[2]];
            let Some(idx) = g.mode_index(k) else { continue };
            if !inside(&g, idx) || g.mode_of(idx) != k {
                continue;
            }
            for i in 0..3 {
                for j in 0..3 {
                    prod[idx][i][j] += a[i] * b[j];
                }
            }
        }
    }
    let mut out = [vec![Complex64::new(0.0, 0.0); g.len()], vec![Complex64::new(0.0, 0.0); g.len()], vec![Complex64::new(0.0, 0.0); g.len()]];
    for idx in 0..g.len() {
        let xi = g.xi_of(idx);
        for i in 0..3 {
            out[i][idx] = (0..3).map(|j| I * xi[j] * prod[idx][i][j]).sum();
        }
    }
    out
}

pub fn project(g: &GridSpec, n: &[Vec<Complex64>; 3]) -> [Vec<Complex64>; 3] {
    let mut out = n.clone();
    for idx in 0..g.len() {
        let xi = g.xi_of(idx);
        let k2: f64 = xi.iter().map(|x| x * x).sum();
        if k2 == 0.0 {
            continue;
        }
        let dot: Complex64 = (0..3).map(|j| xi[j] * n[j][idx]).sum();
        for i in 0..3 {
            out[i][idx] = n[i][idx] - xi[i] * dot / k2;
        }
    }
    out
}

/// `alpha |u|^(beta-1) u` sampled by direct synthesis at every grid point,
/// analysed by a direct DFT, then cut off; the mean is dropped.
pub fn damping_direct(u: &SpectralField, alpha: f64, beta: f64) -> [Vec<Complex64>; 3] {
    let g = *u.grid();
    let n = g.n_modes();
    let modes = support(u);
    let h = g.box_length() / n as f64;
    let mut pts = Vec::new();
    for i1 in 0..n {
        for i2 in 0..n {
            for i3 in 0..n {
                let x = [i1 as f64 * h, i2 as f64 * h, i3 as f64 * h];
                let mut v = [0.0; 3];
                for (_, xi, a) in &modes {
                    let e = Complex64::from_polar(1.0, xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2]);
                    for c in 0..3 {
                        v[c] += (a[c] * e).re;
                    }
                }
                let mag = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                let w = if mag > 0.0 { alpha * mag.powf(beta - 1.0) } else { 0.0 };
                pts.push((x, [w * v[0], w * v[1], w * v[2]]));
            }
        }
    }
    let mut out = [vec![Complex64::new(0.0, 0.0); g.len()], vec![Complex64::new(0.0, 0.0); g.len()], vec![Complex64::new(0.0, 0.0); g.len()]];
    let norm = 1.0 / g.len() as f64;
    for idx in 1..g.len() {
        if !inside(&g, idx) {
            continue;
        }
        let xi = g.xi_of(idx);
        for (x, f) in &pts {
            let e = Complex64::from_polar(norm, -(xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2]));
            for c in 0..3 {
                out[c][idx] += f[c] * e;
            }
        }
    }
    out
}

pub fn relative(reference: &[Vec<Complex64>], got: &[&[Complex64]]) -> f64 {
    let mut diff = 0.0;
    let mut size = 0.0;
    for (r, g) in reference.iter().zip(got) {
        for (a, b) in r.iter().zip(g.iter()) {
            diff += (a - b).norm_sqr();
            size += a.norm_sqr();
        }
    }
    (diff / size).sqrt()
}

pub fn pressure_reference(u: &SpectralField, params: &PhysParams) -> Vec<Complex64> {
    let g = *u.grid();
    let mut n = divergence_of_products(u);
    if params.alpha > 0.0 {
        let d = damping_direct(u, params.alpha, params.beta);
        for c in 0..3 {
            for idx in 0..g.len() {
                n[c][idx] += d[c][idx];
            }
        }
    }
    (0..g.len())
        .map(|idx| {
            let xi = g.xi_of(idx);
            let k2: f64 = xi.iter().map(|x| x * x).sum();
            if k2 == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let dot: Complex64 = (0..3).map(|j| xi[j] * n[j][idx]).sum();
            I * dot / k2
        })
        .collect()
}

/// Worst relative error of `advection` against the convolution over `seeds`.
pub fn advection_error(seeds: std::ops::Range<u64>) -> f64 {
    let g = grid();
    seeds
        .map(|seed| {
            let u = random_solenoidal(&g, seed, 1.0 + seed as f64).unwrap();
            let reference = project(&g, &divergence_of_products(&u));
            let fast = advection(&u);
            let got: Vec<&[Complex64]> = (0..3).map(|c| fast.component(c)).collect();
            relative(&reference, &got)
        })
        .fold(0.0, f64::max)
}

/// Worst relative error of `pressure_field` against direct sums over a few
/// `(seed, alpha, beta)` cases.
pub fn pressure_error() -> f64 {
    let g = grid();
    [(1, 0.0, 4.0), (2, 1.0, 4.0), (3, 0.5, 3.5)]
        .iter()
        .map(|&(seed, alpha, beta)| {
            let u = random_solenoidal(&g, seed, 2.0).unwrap();
            let params = PhysParams::new(1.0, alpha, beta).unwrap();
            let reference = pressure_reference(&u, &params);
            let p = pressure_field(&u, &params);
            relative(&[reference], &[&p.coeffs])
        })
        .fold(0.0, f64::max)
}
