//! Periodic cube discretization.
//!
//! Modes are stored in row-major order of `(m1, m2, m3)` with `m3` fastest.
//! Along each axis the index `i` maps to the integer wavenumber
//! `0, 1, .., N/2-1, -N/2, .., -1` (the usual FFT ordering), and the physical
//! wavenumber of mode `m` is `xi = 2 pi m / L`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

/// Relative slack on the closed-ball test `|xi| <= R`.
const BALL_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    n_modes: usize,
    box_length: f64,
    cutoff_radius: f64,
}

/// Builds a grid whose Friedrichs cutoff is `cutoff_fraction` of the largest
/// resolved axis wavenumber.
pub fn make_grid(n_modes: usize, box_length: f64, cutoff_fraction: f64) -> Result<GridSpec> {
    if !(cutoff_fraction > 0.0 && cutoff_fraction <= 2.0 / 3.0) {
        return Err(Error::InvalidGrid(format!(
            "cutoff_fraction must lie in (0, 2/3], got {cutoff_fraction}"
        )));
    }
    check_modes_and_length(n_modes, box_length)?;
    let radius = cutoff_fraction * (2.0 * PI / box_length) * (n_modes as f64 / 2.0);
    Ok(GridSpec {
        n_modes,
        box_length,
        cutoff_radius: radius,
    })
}

fn check_modes_and_length(n_modes: usize, box_length: f64) -> Result<()> {
    if !n_modes.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "n_modes must be even, got {n_modes}"
        )));
    }
    if n_modes < 4 {
        return Err(Error::InvalidGrid(format!(
            "n_modes must be at least 4, got {n_modes}"
        )));
    }
    if !(box_length > 0.0 && box_length.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "box_length must be positive, got {box_length}"
        )));
    }
    Ok(())
}

impl GridSpec {
    /// Rebuilds a grid from stored parts (checkpoint headers).
    pub fn from_parts(n_modes: usize, box_length: f64, cutoff_radius: f64) -> Result<Self> {
        check_modes_and_length(n_modes, box_length)?;
        let grid = GridSpec {
            n_modes,
            box_length,
            cutoff_radius,
        };
        if !(cutoff_radius > 0.0) || cutoff_radius > grid.dealias_limit() * (1.0 + BALL_SLACK) {
            return Err(Error::InvalidGrid(format!(
                "cutoff_radius {cutoff_radius} outside (0, {}]",
                grid.dealias_limit()
            )));
        }
        Ok(grid)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn cutoff_radius(&self) -> f64 {
        self.cutoff_radius
    }

    /// Same box and cutoff fraction at a different resolution.
    pub fn with_modes(&self, n_modes: usize) -> Result<Self> {
        make_grid(n_modes, self.box_length, self.cutoff_fraction())
    }

    pub fn cutoff_fraction(&self) -> f64 {
        self.cutoff_radius / (self.fundamental() * self.n_modes as f64 / 2.0)
    }

    /// Largest cutoff compatible with 2/3-rule dealiasing.
    pub fn dealias_limit(&self) -> f64 {
        (2.0 / 3.0) * self.fundamental() * (self.n_modes as f64 / 2.0)
    }

    /// `2 pi / L`, the smallest nonzero wavenumber.
    pub fn fundamental(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Total number of modes (equivalently collocation points).
    pub fn len(&self) -> usize {
        self.n_modes * self.n_modes * self.n_modes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume of one collocation cell.
    pub fn cell_volume(&self) -> f64 {
        let h = self.box_length / self.n_modes as f64;
        h * h * h
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    /// Integer wavenumber for axis index `i`.
    pub fn wavenumber_index(&self, i: usize) -> i64 {
        let n = self.n_modes as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Axis index of integer wavenumber `m`, if it is resolved on this grid.
    pub fn axis_index(&self, m: i64) -> Option<usize> {
        let n = self.n_modes as i64;
        if m >= -n / 2 && m < n / 2 {
            Some(m.rem_euclid(n) as usize)
        } else {
            None
        }
    }

    pub fn flat_index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n_modes + i2) * self.n_modes + i3
    }

    /// Flat index of mode `m`, if resolved.
    pub fn mode_index(&self, m: [i64; 3]) -> Option<usize> {
        Some(self.flat_index(
            self.axis_index(m[0])?,
            self.axis_index(m[1])?,
            self.axis_index(m[2])?,
        ))
    }

    /// Integer mode vector of a flat index.
    pub fn mode_of(&self, idx: usize) -> [i64; 3] {
        let n = self.n_modes;
        [
            self.wavenumber_index(idx / (n * n)),
            self.wavenumber_index((idx / n) % n),
            self.wavenumber_index(idx % n),
        ]
    }

    /// Physical wavenumber vector of a flat index.
    pub fn xi_of(&self, idx: usize) -> [f64; 3] {
        let k0 = self.fundamental();
        self.mode_of(idx).map(|m| k0 * m as f64)
    }

    /// Flat index of `-m` for the mode at `idx` (the Nyquist index maps to itself).
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let n = self.n_modes;
        let flip = |i: usize| (n - i) % n;
        self.flat_index(flip(idx / (n * n)), flip((idx / n) % n), flip(idx % n))
    }

    /// Whether a squared wavenumber lies in the closed ball of radius `radius`.
    pub fn in_ball(xi_sq: f64, radius: f64) -> bool {
        xi_sq <= radius * radius * (1.0 + BALL_SLACK)
    }

    /// Physical coordinate of a collocation point along one axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        self.box_length * i as f64 / self.n_modes as f64
    }

    /// Precomputed per-mode tables for hot loops, shared per grid.
    pub fn tables(&self) -> Arc<WaveTables> {
        type Key = (usize, u64, u64);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<WaveTables>>>> = OnceLock::new();
        let key = (self.n_modes, self.box_length.to_bits(), self.cutoff_radius.to_bits());
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("wave table cache poisoned");
        guard.entry(key).or_insert_with(|| Arc::new(WaveTables::new(self))).clone()
    }
}

/// Per-mode wavenumber tables, indexed by flat mode index.
#[derive(Clone, Debug)]
pub struct WaveTables {
    /// `xi` per axis; zero at the Nyquist index so derivatives keep Hermitian symmetry.
    pub xi: [Vec<f64>; 3],
    pub xi_sq: Vec<f64>,
    /// Closed-ball membership `|xi| <= R`.
    pub inside: Vec<bool>,
    pub conj: Vec<usize>,
}

impl WaveTables {
    fn new(grid: &GridSpec) -> Self {
        let n = grid.n_modes();
        let len = grid.len();
        let k0 = grid.fundamental();
        let axis: Vec<f64> = (0..n)
            .map(|i| {
                if i == n / 2 {
                    0.0
                } else {
                    k0 * grid.wavenumber_index(i) as f64
                }
            })
            .collect();
        let mut xi = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
        let mut xi_sq = vec![0.0; len];
        let mut inside = vec![false; len];
        let mut conj = vec![0; len];
        for idx in 0..len {
            let (i1, i2, i3) = (idx / (n * n), (idx / n) % n, idx % n);
            xi[0][idx] = axis[i1];
            xi[1][idx] = axis[i2];
            xi[2][idx] = axis[i3];
            let full = grid.xi_of(idx);
            let sq = full[0] * full[0] + full[1] * full[1] + full[2] * full[2];
            xi_sq[idx] = sq;
            inside[idx] = GridSpec::in_ball(sq, grid.cutoff_radius());
            conj[idx] = grid.conjugate_index(idx);
        }
        WaveTables {
            xi,
            xi_sq,
            inside,
            conj,
        }
    }
}
