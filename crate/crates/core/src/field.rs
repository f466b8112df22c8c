//! Spectral and physical representations of periodic vector fields.
//!
//! Coefficients use the unit-amplitude convention `u(x) = sum_m u_m e^{i xi.x}`,
//! so `L^2` norms carry the box volume: `||u||^2 = L^3 sum_m |u_m|^2`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::grid::GridSpec;
use crate::{Complex64, Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Three-component Fourier coefficient array.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    comps: [Vec<Complex64>; 3],
    solenoidal: bool,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        let n = grid.len();
        SpectralField {
            grid,
            comps: [vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]],
            solenoidal: true,
        }
    }

    pub fn from_components(grid: GridSpec, comps: [Vec<Complex64>; 3]) -> Result<Self> {
        for c in &comps {
            if c.len() != grid.len() {
                return Err(Error::DimensionMismatch {
                    expected: grid.len(),
                    found: c.len(),
                });
            }
        }
        Ok(SpectralField {
            grid,
            comps,
            solenoidal: false,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    /// Mutable access clears the solenoidal flag.
    /// All components at once; clears the solenoidal flag like [`Self::component_mut`].
    pub(crate) fn components_mut(&mut self) -> &mut [Vec<Complex64>; 3] {
        self.solenoidal = false;
        &mut self.comps
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        self.solenoidal = false;
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>; 3] {
        &self.comps
    }

    pub fn into_components(self) -> [Vec<Complex64>; 3] {
        self.comps
    }

    pub fn is_solenoidal(&self) -> bool {
        self.solenoidal
    }

    pub(crate) fn mark_solenoidal(&mut self, flag: bool) {
        self.solenoidal = flag;
    }

    /// Coefficient vector of integer mode `m`, zero if unresolved.
    pub fn mode(&self, m: [i64; 3]) -> [Complex64; 3] {
        match self.grid.mode_index(m) {
            Some(i) => [self.comps[0][i], self.comps[1][i], self.comps[2][i]],
            None => [ZERO; 3],
        }
    }

    /// Sets mode `m` to `value` and mode `-m` to its conjugate.
    pub fn set_mode_pair(&mut self, m: [i64; 3], value: [Complex64; 3]) -> Result<()> {
        let i = self
            .grid
            .mode_index(m)
            .ok_or_else(|| Error::InvalidArgument(format!("mode {m:?} not resolved")))?;
        let j = self.grid.conjugate_index(i);
        self.solenoidal = false;
        for c in 0..3 {
            self.comps[c][i] = value[c];
            self.comps[c][j] = value[c].conj();
        }
        if i == j {
            for c in 0..3 {
                self.comps[c][i].im = 0.0;
            }
        }
        Ok(())
    }

    /// `Re <self, other>_{L^2}`.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        let mut acc = 0.0;
        for c in 0..3 {
            for (a, b) in self.comps[c].iter().zip(&other.comps[c]) {
                acc += a.re * b.re + a.im * b.im;
            }
        }
        acc * self.grid.volume()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        let mut acc = 0.0;
        for c in &self.comps {
            for z in c {
                acc += z.norm_sqr();
            }
        }
        acc * self.grid.volume()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `||grad u||^2_{L^2}`.
    pub fn grad_norm_sq(&self) -> f64 {
        self.weighted_sum(|xi_sq| xi_sq) * self.grid.volume()
    }

    pub(crate) fn weighted_sum(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let tables = self.grid.tables();
        let mut acc = 0.0;
        for idx in 0..self.grid.len() {
            let e = self.comps[0][idx].norm_sqr()
                + self.comps[1][idx].norm_sqr()
                + self.comps[2][idx].norm_sqr();
            if e == 0.0 {
                continue;
            }
            acc += weight(tables.xi_sq[idx]) * e;
        }
        acc
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.comps
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Applies a real per-mode multiplier `w(idx)` to every component.
    pub fn scale_modes(&mut self, w: impl Fn(usize) -> f64) {
        for c in &mut self.comps {
            for (idx, z) in c.iter_mut().enumerate() {
                *z *= w(idx);
            }
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &SpectralField) {
        debug_assert_eq!(self.grid, other.grid);
        self.solenoidal = self.solenoidal && other.solenoidal;
        for c in 0..3 {
            for (x, y) in self.comps[c].iter_mut().zip(&other.comps[c]) {
                *x += *y * a;
            }
        }
    }

    /// Largest `|z(-m) - conj z(m)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let tables = self.grid.tables();
        let mut worst: f64 = 0.0;
        for c in &self.comps {
            for idx in 0..self.grid.len() {
                let j = tables.conj[idx];
                worst = worst.max((c[j] - c[idx].conj()).norm());
            }
        }
        worst
    }

    /// `max_m |xi . u_m|`, with the derivative convention of [`crate::grid::WaveTables`].
    pub fn divergence_max(&self) -> f64 {
        let tables = self.grid.tables();
        let mut worst: f64 = 0.0;
        for idx in 0..self.grid.len() {
            let d = self.comps[0][idx] * tables.xi[0][idx]
                + self.comps[1][idx] * tables.xi[1][idx]
                + self.comps[2][idx] * tables.xi[2][idx];
            worst = worst.max(d.norm());
        }
        worst
    }

    /// Divergence relative to the coefficient scale `max |xi| * ||u||_{l2}`.
    pub fn divergence_relative(&self) -> f64 {
        let coef_norm = (self.l2_norm_sq() / self.grid.volume()).sqrt();
        if coef_norm == 0.0 {
            return 0.0;
        }
        let xi_max = self.grid.fundamental() * (self.grid.n_modes() as f64 / 2.0) * 3f64.sqrt();
        self.divergence_max() / (xi_max * coef_norm)
    }

    /// Largest coefficient outside the closed ball of radius `radius`.
    pub fn max_outside(&self, radius: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in 0..self.grid.len() {
            let xi = self.grid.xi_of(idx);
            if !GridSpec::in_ball(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2], radius) {
                for c in &self.comps {
                    worst = worst.max(c[idx].norm());
                }
            }
        }
        worst
    }

    /// Checks Hermitian symmetry, truncation, zero mean and (when flagged)
    /// solenoidality. `tol` is relative to the largest coefficient.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::Invariant("non-finite coefficient".into()));
        }
        let scale = self.max_abs_coefficient();
        if scale == 0.0 {
            return Ok(());
        }
        let h = self.hermitian_defect();
        if h > tol * scale {
            return Err(Error::Invariant(format!("Hermitian symmetry defect {h:e}")));
        }
        let out = self.max_outside(self.grid.cutoff_radius());
        if out > 0.0 {
            return Err(Error::Invariant(format!(
                "coefficient {out:e} beyond the cutoff radius"
            )));
        }
        let mean = (0..3).map(|c| self.comps[c][0].norm()).fold(0.0, f64::max);
        if mean > 0.0 {
            return Err(Error::Invariant(format!("nonzero mean mode {mean:e}")));
        }
        if self.solenoidal {
            let d = self.divergence_relative();
            if d > tol {
                return Err(Error::Invariant(format!("relative divergence {d:e}")));
            }
        }
        Ok(())
    }

    /// Parity image `x -> -x, u -> -u`: coefficient `-conj(u_m)`.
    pub fn reflected(&self) -> SpectralField {
        let mut out = self.clone();
        for c in &mut out.comps {
            for z in c.iter_mut() {
                *z = -z.conj();
            }
        }
        out
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        let mut out = self.clone();
        for c in &mut out.comps {
            for z in c.iter_mut() {
                *z = -*z;
            }
        }
        out
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, a: f64) -> SpectralField {
        let mut out = self.clone();
        for c in &mut out.comps {
            for z in c.iter_mut() {
                *z *= a;
            }
        }
        out
    }
}

/// Scalar Fourier coefficient array (pressure, divergence).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarSpectral {
    pub grid: GridSpec,
    pub coeffs: Vec<Complex64>,
}

impl ScalarSpectral {
    pub fn zeros(grid: GridSpec) -> Self {
        ScalarSpectral {
            grid,
            coeffs: vec![ZERO; grid.len()],
        }
    }

    pub fn l2_norm(&self) -> f64 {
        (self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.volume()).sqrt()
    }

    /// Spectral gradient as a vector field.
    pub fn gradient(&self) -> SpectralField {
        let mut out = SpectralField::zeros(self.grid);
        out.mark_solenoidal(false);
        for idx in 0..self.grid.len() {
            let xi = self.grid.xi_of(idx);
            let i_p = Complex64::new(0.0, 1.0) * self.coeffs[idx];
            for c in 0..3 {
                out.comps[c][idx] = i_p * xi[c];
            }
        }
        out
    }
}

/// Velocity samples on the `N^3` collocation grid, same flat ordering as the modes.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField {
    grid: GridSpec,
    comps: [Vec<f64>; 3],
}

impl PhysicalField {
    pub fn zeros(grid: GridSpec) -> Self {
        let n = grid.len();
        PhysicalField {
            grid,
            comps: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    pub fn from_components(grid: GridSpec, comps: [Vec<f64>; 3]) -> Result<Self> {
        for c in &comps {
            if c.len() != grid.len() {
                return Err(Error::DimensionMismatch {
                    expected: grid.len(),
                    found: c.len(),
                });
            }
        }
        Ok(PhysicalField { grid, comps })
    }

    /// Samples `f(x, y, z)` at the collocation points.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> Self {
        let n = grid.n_modes();
        let mut out = PhysicalField::zeros(grid);
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    let v = f(
                        grid.coordinate(i1),
                        grid.coordinate(i2),
                        grid.coordinate(i3),
                    );
                    let idx = grid.flat_index(i1, i2, i3);
                    for c in 0..3 {
                        out.comps[c][idx] = v[c];
                    }
                }
            }
        }
        out
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    pub fn components(&self) -> &[Vec<f64>; 3] {
        &self.comps
    }

    pub fn magnitude_at(&self, idx: usize) -> f64 {
        let [a, b, c] = [self.comps[0][idx], self.comps[1][idx], self.comps[2][idx]];
        (a * a + b * b + c * c).sqrt()
    }

    pub fn max_magnitude(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| self.magnitude_at(i))
            .fold(0.0, f64::max)
    }
}
