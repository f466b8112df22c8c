//! Closed-form and seeded initial velocity fields.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::field::{PhysicalField, SpectralField};
use crate::grid::GridSpec;
use crate::spectral::{friedrichs_truncate, leray_project, to_spectral};
use crate::{Complex64, Error, Result};

/// Taylor-Green vortex `A (sin x cos y cos z, -cos x sin y cos z, 0)` with
/// `x` measured in units of `L / 2 pi`. Lives on the `|m| = sqrt 3` shell.
pub fn taylor_green(grid: &GridSpec, amplitude: f64) -> Result<SpectralField> {
    let mut f = SpectralField::zeros(*grid);
    let eighth = amplitude / 8.0;
    for s2 in [-1i64, 1] {
        for s3 in [-1i64, 1] {
            let v = [
                Complex64::new(0.0, -eighth),
                Complex64::new(0.0, eighth * s2 as f64),
                Complex64::new(0.0, 0.0),
            ];
            f.set_mode_pair([1, s2, s3], v)?;
        }
    }
    require_inside(&f, "Taylor-Green field")?;
    f.mark_solenoidal(true);
    Ok(f)
}

/// Shear mode `A (sin(2 pi y / L), 0, 0)`.
pub fn shear_mode(grid: &GridSpec, amplitude: f64) -> Result<SpectralField> {
    let mut f = SpectralField::zeros(*grid);
    let zero = Complex64::new(0.0, 0.0);
    f.set_mode_pair(
        [0, 1, 0],
        [Complex64::new(0.0, -amplitude / 2.0), zero, zero],
    )?;
    require_inside(&f, "shear mode")?;
    f.mark_solenoidal(true);
    Ok(f)
}

/// Seeded random solenoidal field: projected white noise, truncated to
/// `|xi| <= R/2`, scaled to `||u||_{L^2} = norm`.
pub fn random_solenoidal(grid: &GridSpec, seed: u64, norm: f64) -> Result<SpectralField> {
    random_band_limited(grid, seed, norm, 0.5 * grid.cutoff_radius(), true)
}

/// Seeded random zero-mean field supported in `|xi| <= radius`, optionally projected.
pub fn random_band_limited(
    grid: &GridSpec,
    seed: u64,
    norm: f64,
    radius: f64,
    solenoidal: bool,
) -> Result<SpectralField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = grid.len();
    let mut draw = || -> Vec<f64> { (0..len).map(|_| StandardNormal.sample(&mut rng)).collect() };
    let comps = [draw(), draw(), draw()];
    let noise = PhysicalField::from_components(*grid, comps)?;
    let mut f = to_spectral(&noise, grid)?;
    for c in 0..3 {
        f.component_mut(c)[0] = Complex64::new(0.0, 0.0);
    }
    let mut f = friedrichs_truncate(&f, radius.min(grid.cutoff_radius()))?;
    if solenoidal {
        f = leray_project(&f);
    }
    let current = f.l2_norm();
    if current == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "no resolved modes inside radius {radius}"
        )));
    }
    let flag = f.is_solenoidal();
    let mut out = &f * (norm / current);
    out.mark_solenoidal(flag);
    Ok(out)
}

fn require_inside(f: &SpectralField, what: &str) -> Result<()> {
    if f.max_outside(f.grid().cutoff_radius()) > 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{what} is not resolved inside the cutoff radius"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::spectral::to_physical;
    use std::f64::consts::PI;

    #[test]
    fn taylor_green_matches_samples() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let f = taylor_green(&g, 1.5).unwrap();
        let p = to_physical(&f);
        let exact = PhysicalField::from_fn(g, |x, y, z| {
            [
                1.5 * x.sin() * y.cos() * z.cos(),
                -1.5 * x.cos() * y.sin() * z.cos(),
                0.0,
            ]
        });
        for c in 0..3 {
            for (a, b) in p.component(c).iter().zip(exact.component(c)) {
                assert!((a - b).abs() < 1e-14);
            }
        }
        assert!(f.check_invariants(1e-14).is_ok());
        assert!(taylor_green(&make_grid(4, 2.0 * PI, 2.0 / 3.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn random_field_is_valid_and_seeded() {
        let g = make_grid(16, 2.0 * PI, 2.0 / 3.0).unwrap();
        let a = random_solenoidal(&g, 7, 1.0).unwrap();
        let b = random_solenoidal(&g, 7, 1.0).unwrap();
        assert_eq!(a, b);
        assert!((a.l2_norm() - 1.0).abs() < 1e-14);
        assert!(a.check_invariants(1e-12).is_ok());
        assert!(a.max_outside(0.5 * g.cutoff_radius()) == 0.0);
        assert_ne!(a, random_solenoidal(&g, 8, 1.0).unwrap());
    }
}
