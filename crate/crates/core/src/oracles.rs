//! Solver-independent checks of the inequalities behind the stability
//! estimates.
//!
//! - [`monotonicity_gap`]: `<|x|^b x - |y|^b y, x - y> >= (|x|^b + |y|^b) |x - y|^2 / 2`,
//! - [`young_gap`]: `ab <= a^p/p + b^q/q` for conjugate `p, q`,
//! - [`gronwall_constant`]: `C = (2/alpha)^(2/(beta-3)) / 2`,
//! - [`interpolation_gap`]: `||u||_{H^{3/5}} <= ||u||^{2/5} ||u||_{H^1}^{3/5}` (homogeneous),
//! - [`product_law_ratio`]: `||f g||_{H^{-1/2}} / (||f|| ||g||_{H^1})`, reported only.
//!
//! Floating-point gaps are compared relative to the magnitude of the terms
//! that produced them; see [`monotonicity_scale`] and [`young_scale`].

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::field::SpectralField;
use crate::grid::make_grid;
use crate::initial::random_band_limited;
use crate::spectral::{forward_real, inverse_real, resample, sobolev_norm};
use crate::{Error, Result};

/// `<|x|^b x - |y|^b y, x - y> - (|x|^b + |y|^b) |x - y|^2 / 2`.
pub fn monotonicity_gap(x: &[f64], y: &[f64], beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let (a, b) = (norm(x).powf(beta), norm(y).powf(beta));
    let mut lhs = 0.0;
    let mut d_sq = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let d = xi - yi;
        lhs += (a * xi - b * yi) * d;
        d_sq += d * d;
    }
    Ok(lhs - 0.5 * (a + b) * d_sq)
}

/// Size of the rounding error in [`monotonicity_gap`]:
/// `(|x|^b + |y|^b)(|x| + |y|)|x - y|`.
pub fn monotonicity_scale(x: &[f64], y: &[f64], beta: f64) -> f64 {
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let (nx, ny) = (norm(x), norm(y));
    (nx.powf(beta) + ny.powf(beta)) * (nx + ny) * norm(&d)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Tolerance on `|1/p + 1/q - 1|`.
pub const CONJUGACY_TOL: f64 = 1e-12;

/// `a^p/p + b^q/q - ab`.
pub fn young_gap(a: f64, b: f64, p: f64, q: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::InvalidArgument(format!("a, b must be nonnegative, got {a}, {b}")));
    }
    if !(p > 1.0 && q > 1.0) || (1.0 / p + 1.0 / q - 1.0).abs() > CONJUGACY_TOL {
        return Err(Error::InvalidArgument(format!("exponents {p}, {q} are not conjugate")));
    }
    Ok(a.powf(p) / p + b.powf(q) / q - a * b)
}

pub fn young_scale(a: f64, b: f64, p: f64, q: f64) -> f64 {
    a.powf(p) / p + b.powf(q) / q
}

/// The uniqueness-bound constant `C_{alpha,beta} = (2/alpha)^(2/(beta-3)) / 2`.
pub fn gronwall_constant(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParams(format!("alpha must be positive, got {alpha}")));
    }
    if !(beta > 3.0) {
        return Err(Error::InvalidParams(format!("C_(alpha,beta) needs beta > 3, got {beta}")));
    }
    Ok(0.5 * (2.0 / alpha).powf(2.0 / (beta - 3.0)))
}

/// `||u||_{H0}^{2/5} ||u||_{H1}^{3/5} - ||u||_{H^{3/5}}`, homogeneous norms.
/// Zero for the zero field.
pub fn interpolation_gap(f: &SpectralField) -> f64 {
    let h0 = sobolev_norm(f, 0.0, true);
    if h0 == 0.0 {
        return 0.0;
    }
    let h1 = sobolev_norm(f, 1.0, true);
    h0.powf(0.4) * h1.powf(0.6) - sobolev_norm(f, 0.6, true)
}

/// `||f (x) g||_{H^{-1/2}} / (||f||_{L2} ||g||_{H^1})` with the tensor product
/// formed exactly on a grid of twice the resolution.
pub fn product_law_ratio(f: &SpectralField, g: &SpectralField) -> Result<f64> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let denom = sobolev_norm(f, 0.0, true) * sobolev_norm(g, 1.0, true);
    if !(denom > 0.0) {
        return Err(Error::InvalidArgument("product law ratio has a zero denominator".into()));
    }
    let src = f.grid();
    let fine = make_grid(2 * src.n_modes(), src.box_length(), 2.0 / 3.0)?;
    let (ff, gf) = (resample(f, &fine)?, resample(g, &fine)?);
    let cf = ff.components();
    let cg = gf.components();
    let phys = inverse_real(&fine, &[&cf[0], &cf[1], &cf[2], &cg[0], &cg[1], &cg[2]]);
    let products: Vec<Vec<f64>> = (0..9)
        .map(|k| phys[k / 3].iter().zip(&phys[3 + k % 3]).map(|(a, b)| a * b).collect())
        .collect();
    let refs: Vec<&[f64]> = products.iter().map(|v| v.as_slice()).collect();
    let spectra = forward_real(&fine, &refs);
    let mut sum = 0.0;
    for idx in 1..fine.len() {
        let xi = fine.xi_of(idx);
        let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let energy: f64 = spectra.iter().map(|s| s[idx].norm_sqr()).sum();
        sum += energy / k;
    }
    Ok((sum * fine.volume()).sqrt() / denom)
}

/// Sample counts for [`verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteSizes {
    pub monotonicity: usize,
    pub young: usize,
    /// Side of the `(alpha, beta)` grid is chosen so the pair count reaches this.
    pub gronwall: usize,
    pub interpolation: usize,
    pub product_law: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes { monotonicity: 100_000, young: 100_000, gronwall: 1_000, interpolation: 1_000, product_law: 50 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub name: &'static str,
    pub samples: usize,
    /// Most negative normalized gap (or, for reported-only rows, the largest ratio).
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

impl fmt::Display for OracleRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<16} {:>4} samples={:<7} worst={:>+11.3e} tol={:<9.1e} {}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.samples,
            self.worst,
            self.tolerance,
            self.note
        )
    }
}

/// Heavy-tailed scalar: unit normal or `+-1/U`, capped at `1e12`.
fn heavy(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random::<bool>() {
        rng.sample(StandardNormal)
    } else {
        let u: f64 = rng.random::<f64>().max(1e-12);
        if rng.random::<bool>() {
            1.0 / u
        } else {
            -1.0 / u
        }
    }
}

/// Pair `(x, y)` of one of the stressed shapes.
fn monotonicity_pair(rng: &mut ChaCha8Rng, d: usize) -> (Vec<f64>, Vec<f64>) {
    let x: Vec<f64> = (0..d).map(|_| heavy(rng)).collect();
    let y: Vec<f64> = match rng.random_range(0..6) {
        0 => x.clone(),
        1 => vec![0.0; d],
        // Equal length: reversed order and sign.
        2 => x.iter().rev().map(|c| -c).collect(),
        3 => x.iter().map(|c| c * (1.0 + 1e-9 * rng.sample::<f64, _>(StandardNormal))).collect(),
        4 => x.iter().map(|c| c * rng.random_range(-1e-6..1e-6)).collect(),
        _ => (0..d).map(|_| heavy(rng)).collect(),
    };
    (x, y)
}

fn monotonicity_row(n: usize, seed: u64) -> OracleRow {
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = [1usize, 2, 3, 8];
    let mut worst = f64::INFINITY;
    for i in 0..n {
        let d = dims[i % dims.len()];
        let beta = rng.random_range(0.5..=6.0);
        let (x, y) = monotonicity_pair(&mut rng, d);
        let gap = monotonicity_gap(&x, &y, beta).expect("valid sample");
        let scale = monotonicity_scale(&x, &y, beta);
        let rel = if scale > 0.0 { gap / scale } else { gap };
        worst = worst.min(rel);
    }
    OracleRow {
        name: "monotonicity",
        samples: n,
        worst,
        tolerance: TOL,
        passed: worst >= -TOL,
        note: "d in {1,2,3,8}, beta in [0.5,6]".into(),
    }
}

fn young_row(n: usize, seed: u64) -> OracleRow {
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let magnitude = |rng: &mut ChaCha8Rng| 10f64.powf(rng.random_range(-6.0..=6.0));
    for i in 0..n {
        let (p, q) = if i % 2 == 0 {
            let beta: f64 = rng.random_range(3.1..=8.0);
            ((beta - 1.0) / 2.0, (beta - 1.0) / (beta - 3.0))
        } else {
            let p: f64 = rng.random_range(1.05..=20.0);
            (p, p / (p - 1.0))
        };
        let a = magnitude(&mut rng);
        // Every fourth sample sits on the equality curve b = a^(p-1).
        let b = if i % 4 == 1 { a.powf(p - 1.0) } else { magnitude(&mut rng) };
        let gap = young_gap(a, b, p, q).expect("conjugate sample");
        let scale = young_scale(a, b, p, q);
        worst = worst.min(if scale > 0.0 { gap / scale } else { gap });
    }
    OracleRow {
        name: "young",
        samples: n,
        worst,
        tolerance: TOL,
        passed: worst >= -TOL,
        note: "half from p=(b-1)/2, q=(b-1)/(b-3), b in [3.1,8]".into(),
    }
}

fn gronwall_row(pairs: usize) -> OracleRow {
    let side = (pairs as f64).sqrt().ceil() as usize;
    let alphas: Vec<f64> = (0..side).map(|i| 0.1 + 3.9 * i as f64 / (side - 1) as f64).collect();
    let betas: Vec<f64> = (0..side).map(|j| 3.2 + 4.8 * j as f64 / (side - 1) as f64).collect();
    let c = |a: f64, b: f64| gronwall_constant(a, b).expect("beta > 3");
    // Worst is the smallest relative drop between neighbours that must decrease.
    let mut worst = f64::INFINITY;
    for &b in &betas {
        for w in alphas.windows(2) {
            worst = worst.min((c(w[0], b) - c(w[1], b)) / c(w[0], b));
        }
    }
    for &a in alphas.iter().filter(|&&a| a < 2.0) {
        for w in betas.windows(2) {
            worst = worst.min((c(a, w[0]) - c(a, w[1])) / c(a, w[0]));
        }
    }
    OracleRow {
        name: "gronwall",
        samples: side * side,
        worst,
        tolerance: 0.0,
        passed: worst > 0.0,
        note: "strictly decreasing in alpha, and in beta for alpha < 2".into(),
    }
}

fn interpolation_row(n: usize, seed: u64) -> OracleRow {
    const TOL: f64 = 1e-10;
    let grid = make_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).expect("valid grid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for i in 0..n {
        let radius = grid.cutoff_radius() * rng.random_range(0.4..=1.0);
        let f = random_band_limited(&grid, seed ^ (i as u64).wrapping_mul(0x9e37_79b9), 1.0, radius, i % 2 == 0)
            .expect("populated ball");
        let h0 = sobolev_norm(&f, 0.0, true);
        let rhs = h0.powf(0.4) * sobolev_norm(&f, 1.0, true).powf(0.6);
        worst = worst.min(interpolation_gap(&f) / rhs);
    }
    OracleRow {
        name: "interpolation",
        samples: n,
        worst,
        tolerance: TOL,
        passed: worst >= -TOL,
        note: "random band-limited fields, N = 8".into(),
    }
}

fn product_law_row(n: usize, seed: u64) -> OracleRow {
    let grid = make_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).expect("valid grid");
    let mut worst: f64 = 0.0;
    for i in 0..n as u64 {
        let f = random_band_limited(&grid, seed + 2 * i, 1.0, grid.cutoff_radius(), true).expect("populated");
        let g = random_band_limited(&grid, seed + 2 * i + 1, 1.0, grid.cutoff_radius(), true).expect("populated");
        worst = worst.max(product_law_ratio(&f, &g).expect("nonzero fields"));
    }
    OracleRow {
        name: "product-law",
        samples: n,
        worst,
        tolerance: f64::NAN,
        passed: worst.is_finite(),
        note: "largest ratio; constant unknown, reported only".into(),
    }
}

/// Runs every oracle family from one seed.
pub fn verify(sizes: SuiteSizes, seed: u64) -> Vec<OracleRow> {
    vec![
        monotonicity_row(sizes.monotonicity, seed),
        young_row(sizes.young, seed.wrapping_add(1)),
        gronwall_row(sizes.gronwall),
        interpolation_row(sizes.interpolation, seed.wrapping_add(2)),
        product_law_row(sizes.product_law, seed.wrapping_add(3)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn monotonicity_examples() {
        assert_eq!(monotonicity_gap(&[1.5, -2.0], &[1.5, -2.0], 3.0).unwrap(), 0.0);
        assert_eq!(monotonicity_gap(&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0], 2.0).unwrap(), 0.0);
        assert_eq!(monotonicity_gap(&[2.0, 0.0, 0.0], &[0.0, 0.0, 0.0], 1.0).unwrap(), 4.0);
        assert!(monotonicity_gap(&[1.0], &[0.0], 0.0).is_err());
        assert!(monotonicity_gap(&[1.0], &[0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn young_examples() {
        assert!(young_gap(1.0, 1.0, 2.0, 2.0).unwrap().abs() < 1e-15);
        assert_eq!(young_gap(1.0, 2.0, 2.0, 2.0).unwrap(), 0.5);
        assert!(young_gap(1.0, 1.0, 2.0, 3.0).is_err());
    }

    #[test]
    fn gronwall_examples() {
        for beta in [3.5, 4.0, 7.0] {
            assert_eq!(gronwall_constant(2.0, beta).unwrap(), 0.5);
        }
        assert_eq!(gronwall_constant(1.0, 4.0).unwrap(), 2.0);
        assert_eq!(gronwall_constant(0.5, 5.0).unwrap(), 2.0);
        assert!(gronwall_constant(1.0, 3.0).is_err());
        assert!(gronwall_constant(0.0, 4.0).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(interpolation_gap(&SpectralField::zeros(g)), 0.0);
        let mut one = SpectralField::zeros(g);
        one.set_mode_pair([1, 0, 0], [z, Complex64::new(0.4, 0.1), z]).unwrap();
        assert!(interpolation_gap(&one).abs() < 1e-15);
        let mut two = one.clone();
        two.set_mode_pair([2, 0, 0], [z, Complex64::new(0.4, 0.1), z]).unwrap();
        assert!(interpolation_gap(&two) > 1e-3);
    }

    #[test]
    fn product_law_two_modes() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let z = Complex64::new(0.0, 0.0);
        let (a, b) = (0.7, 1.9);
        let mut f = SpectralField::zeros(g);
        f.set_mode_pair([1, 0, 0], [z, z, Complex64::new(a / 2.0, 0.0)]).unwrap();
        let mut h = SpectralField::zeros(g);
        h.set_mode_pair([0, 2, 0], [z, z, Complex64::new(b / 2.0, 0.0)]).unwrap();
        // f3 g3 = ab cos x cos 2y: four modes of size ab/4 at |xi| = sqrt 5.
        let vol = g.volume();
        let num = (vol * 4.0 * (a * b / 4.0).powi(2) / 5f64.sqrt()).sqrt();
        let den = (vol * a * a / 2.0).sqrt() * (vol * 4.0 * b * b / 2.0).sqrt();
        let r = product_law_ratio(&f, &h).unwrap();
        assert!((r - num / den).abs() < 1e-13 * r);
        let r2 = product_law_ratio(&(&f * 2.0), &h).unwrap();
        assert!((r2 - r).abs() < 1e-13 * r);
        assert!(product_law_ratio(&f, &SpectralField::zeros(g)).is_err());
    }

    #[test]
    fn small_suite_passes() {
        let sizes = SuiteSizes { monotonicity: 2_000, young: 2_000, gronwall: 100, interpolation: 20, product_law: 3 };
        for row in verify(sizes, 7) {
            assert!(row.passed, "{row}");
        }
    }
}
