//! Three-dimensional complex FFT on an `N^3` row-major buffer.
//!
//! Normalization: the forward transform is scaled by `1/N^3`, so a unit
//! amplitude `cos` has coefficients `1/2` at `+-m`; the inverse is unscaled.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Shared plan for an `n^3` grid.
pub fn plan(n: usize) -> Arc<Fft3> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Fft3>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Fft3 {
                n,
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

impl Fft3 {
    pub fn n(&self) -> usize {
        self.n
    }

    /// In-place forward transform, scaled by `1/N^3`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &*self.forward);
        let scale = 1.0 / (self.n * self.n * self.n) as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }

    /// In-place unscaled inverse transform.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &*self.inverse);
    }

    fn transform(&self, data: &mut [Complex64], fft: &dyn Fft<f64>) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n, "buffer does not match an {n}^3 grid");
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];

        // Axis 3 is contiguous.
        fft.process_with_scratch(data, &mut scratch);

        // Axis 2: stride n inside each plane.
        let mut lines = vec![Complex64::new(0.0, 0.0); n * n];
        for plane in data.chunks_exact_mut(n * n) {
            for i2 in 0..n {
                for i3 in 0..n {
                    lines[i3 * n + i2] = plane[i2 * n + i3];
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            for i2 in 0..n {
                for i3 in 0..n {
                    plane[i2 * n + i3] = lines[i3 * n + i2];
                }
            }
        }

        // Axis 1: stride n^2, gathered one i2-slab at a time.
        for i2 in 0..n {
            for i1 in 0..n {
                let src = (i1 * n + i2) * n;
                for i3 in 0..n {
                    lines[i3 * n + i1] = data[src + i3];
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            for i1 in 0..n {
                let dst = (i1 * n + i2) * n;
                for i3 in 0..n {
                    data[dst + i3] = lines[i3 * n + i1];
                }
            }
        }
    }
}
