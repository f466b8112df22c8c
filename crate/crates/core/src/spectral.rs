//! Transforms, Fourier multipliers and norms on [`SpectralField`]s.
//!
//! Every operator here is a pure function. Real fields are transformed two at
//! a time by packing them as the real and imaginary parts of one complex FFT.

use crate::fft;
use crate::field::{PhysicalField, ScalarSpectral, SpectralField};
use crate::grid::GridSpec;
use crate::{Complex64, Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Inverse transforms Hermitian coefficient arrays to real samples.
pub(crate) fn inverse_real(grid: &GridSpec, spectra: &[&[Complex64]]) -> Vec<Vec<f64>> {
    let plan = fft::plan(grid.n_modes());
    let mut out = Vec::with_capacity(spectra.len());
    for pair in spectra.chunks(2) {
        let mut buf: Vec<Complex64> = match pair {
            [a, b] => a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| x + Complex64::new(-y.im, y.re))
                .collect(),
            [a] => a.to_vec(),
            _ => unreachable!(),
        };
        plan.inverse(&mut buf);
        out.push(buf.iter().map(|z| z.re).collect());
        if pair.len() == 2 {
            out.push(buf.iter().map(|z| z.im).collect());
        }
    }
    out
}

/// Forward transforms real samples to (Hermitian) coefficient arrays.
pub(crate) fn forward_real(grid: &GridSpec, samples: &[&[f64]]) -> Vec<Vec<Complex64>> {
    let plan = fft::plan(grid.n_modes());
    let tables = grid.tables();
    let conj = &tables.conj;
    let len = grid.len();
    let mut out = Vec::with_capacity(samples.len());
    for pair in samples.chunks(2) {
        match pair {
            [a, b] => {
                let mut buf: Vec<Complex64> = a
                    .iter()
                    .zip(b.iter())
                    .map(|(&x, &y)| Complex64::new(x, y))
                    .collect();
                plan.forward(&mut buf);
                let mut first = vec![ZERO; len];
                let mut second = vec![ZERO; len];
                for idx in 0..len {
                    let z = buf[idx];
                    let zc = buf[conj[idx]].conj();
                    first[idx] = (z + zc) * 0.5;
                    // (z - zc) / 2i
                    let d = (z - zc) * 0.5;
                    second[idx] = Complex64::new(d.im, -d.re);
                }
                out.push(first);
                out.push(second);
            }
            [a] => {
                let mut buf: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                plan.forward(&mut buf);
                out.push(buf);
            }
            _ => unreachable!(),
        }
    }
    out
}

/// Samples the field on the collocation grid.
pub fn to_physical(f: &SpectralField) -> PhysicalField {
    let c = f.components();
    let mut parts = inverse_real(f.grid(), &[&c[0], &c[1], &c[2]]).into_iter();
    let comps = [
        parts.next().unwrap(),
        parts.next().unwrap(),
        parts.next().unwrap(),
    ];
    PhysicalField::from_components(*f.grid(), comps).expect("transform preserves length")
}

/// Raw coefficients of collocation samples; no truncation or projection is applied.
pub fn to_spectral(samples: &PhysicalField, grid: &GridSpec) -> Result<SpectralField> {
    if samples.grid().n_modes() != grid.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            found: samples.grid().len(),
        });
    }
    let c = samples.components();
    let mut parts = forward_real(grid, &[&c[0], &c[1], &c[2]]).into_iter();
    SpectralField::from_components(
        *grid,
        [
            parts.next().unwrap(),
            parts.next().unwrap(),
            parts.next().unwrap(),
        ],
    )
}

/// Leray projection `M(xi) u(xi)`, identity at `xi = 0`.
pub fn leray_project(f: &SpectralField) -> SpectralField {
    let tables = f.grid().tables();
    let mut out = f.clone();
    project_in_place(&mut out, &tables.xi);
    out
}

pub(crate) fn project_in_place(f: &mut SpectralField, xi: &[Vec<f64>; 3]) {
    let len = f.grid().len();
    let comps = f.components_mut();
    for idx in 0..len {
        let k = [xi[0][idx], xi[1][idx], xi[2][idx]];
        let k_sq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k_sq == 0.0 {
            continue;
        }
        let dot = (comps[0][idx] * k[0] + comps[1][idx] * k[1] + comps[2][idx] * k[2]) / k_sq;
        for c in 0..3 {
            comps[c][idx] -= dot * k[c];
        }
    }
    f.mark_solenoidal(true);
}

/// Friedrichs operator `J_R`: zero every coefficient with `|xi| > radius`.
pub fn friedrichs_truncate(f: &SpectralField, radius: f64) -> Result<SpectralField> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "truncation radius must be positive, got {radius}"
        )));
    }
    let mut out = f.clone();
    let solenoidal = f.is_solenoidal();
    let grid = *f.grid();
    for c in 0..3 {
        let comp = out.component_mut(c);
        for (idx, z) in comp.iter_mut().enumerate() {
            let xi = grid.xi_of(idx);
            if !GridSpec::in_ball(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2], radius) {
                *z = ZERO;
            }
        }
    }
    out.mark_solenoidal(solenoidal);
    Ok(out)
}

/// Truncation at the grid's own cutoff, with a precomputed mask.
pub(crate) fn truncate_in_place(f: &mut SpectralField, inside: &[bool]) {
    let solenoidal = f.is_solenoidal();
    for c in 0..3 {
        for (z, &keep) in f.component_mut(c).iter_mut().zip(inside) {
            if !keep {
                *z = ZERO;
            }
        }
    }
    f.mark_solenoidal(solenoidal);
}

/// Sobolev norm with weight `|xi|^{2s}` (homogeneous, mean mode skipped) or
/// `(1 + |xi|^2)^s`.
pub fn sobolev_norm(f: &SpectralField, s: f64, homogeneous: bool) -> f64 {
    let sum = if homogeneous {
        f.weighted_sum(|k2| if k2 == 0.0 { 0.0 } else { k2.powf(s) })
    } else {
        f.weighted_sum(|k2| (1.0 + k2).powf(s))
    };
    (sum * f.grid().volume()).sqrt()
}

/// `L^p` norm by rectangle-rule quadrature on the collocation grid.
///
/// Exact at `p = 2`; for other `p` it is a spectrally accurate approximation
/// on smooth fields.
pub fn lp_norm_physical(f: &SpectralField, p: f64) -> Result<f64> {
    lp_norm_samples(&to_physical(f), p)
}

pub fn lp_norm_samples(samples: &PhysicalField, p: f64) -> Result<f64> {
    Ok(lp_integral_samples(samples, p)?.powf(1.0 / p))
}

/// `int |u|^p dx` by rectangle-rule quadrature.
pub fn lp_integral_samples(samples: &PhysicalField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "L^p norm needs p >= 1, got {p}"
        )));
    }
    let mut acc = 0.0;
    for idx in 0..samples.grid().len() {
        let m = samples.magnitude_at(idx);
        if m > 0.0 {
            acc += m.powf(p);
        }
    }
    Ok(acc * samples.grid().cell_volume())
}

/// Splits into `|xi| < 1` and `|xi| >= 1` parts.
pub fn frequency_split(f: &SpectralField) -> (SpectralField, SpectralField) {
    let grid = *f.grid();
    let mut low = f.clone();
    let mut high = f.clone();
    for c in 0..3 {
        let lo = low.component_mut(c);
        for (idx, z) in lo.iter_mut().enumerate() {
            let xi = grid.xi_of(idx);
            if xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] >= 1.0 {
                *z = ZERO;
            }
        }
        let hi = high.component_mut(c);
        for (idx, z) in hi.iter_mut().enumerate() {
            let xi = grid.xi_of(idx);
            if xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] < 1.0 {
                *z = ZERO;
            }
        }
    }
    low.mark_solenoidal(f.is_solenoidal());
    high.mark_solenoidal(f.is_solenoidal());
    (low, high)
}

/// Divergence `i xi . u` as a scalar field.
pub fn divergence(f: &SpectralField) -> ScalarSpectral {
    let tables = f.grid().tables();
    let c = f.components();
    let mut out = ScalarSpectral::zeros(*f.grid());
    for idx in 0..f.grid().len() {
        let d = c[0][idx] * tables.xi[0][idx]
            + c[1][idx] * tables.xi[1][idx]
            + c[2][idx] * tables.xi[2][idx];
        out.coeffs[idx] = Complex64::new(-d.im, d.re);
    }
    out
}

/// Copies the modes common to both grids into a field on `target`.
///
/// Both grids must share the box length. Modes not resolved on `target` are
/// dropped; use [`fits_on`] to check that nothing is lost.
pub fn resample(f: &SpectralField, target: &GridSpec) -> Result<SpectralField> {
    let src = f.grid();
    if (src.box_length() - target.box_length()).abs() > 1e-12 * src.box_length() {
        return Err(Error::GridMismatch);
    }
    let mut comps = [
        vec![ZERO; target.len()],
        vec![ZERO; target.len()],
        vec![ZERO; target.len()],
    ];
    for idx in 0..src.len() {
        let m = src.mode_of(idx);
        // Nyquist modes of the source have no unique counterpart.
        if m.iter().any(|&a| a == -(src.n_modes() as i64) / 2) {
            continue;
        }
        if let Some(j) = target.mode_index(m) {
            if m.iter().all(|&a| a != -(target.n_modes() as i64) / 2) {
                for c in 0..3 {
                    comps[c][j] = f.component(c)[idx];
                }
            }
        }
    }
    let mut out = SpectralField::from_components(*target, comps)?;
    out.mark_solenoidal(f.is_solenoidal());
    Ok(out)
}

/// Whether every nonzero coefficient of `f` lies inside `target`'s cutoff ball.
pub fn fits_on(f: &SpectralField, target: &GridSpec) -> bool {
    let src = f.grid();
    (0..src.len()).all(|idx| {
        let nonzero = (0..3).any(|c| f.component(c)[idx] != ZERO);
        if !nonzero {
            return true;
        }
        let xi = src.xi_of(idx);
        let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        GridSpec::in_ball(k2, target.cutoff_radius())
            && target.mode_index(src.mode_of(idx)).is_some()
    })
}
