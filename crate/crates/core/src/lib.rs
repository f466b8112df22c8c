//! Pseudo-spectral solver for the incompressible Navier-Stokes equations with
//! polynomial damping `alpha |u|^(beta-1) u` on a periodic cube.
//!
//! The evolved system is the Friedrichs-truncated one: every nonlinear term is
//! evaluated on the collocation grid, cut off to the closed ball `|xi| <= R`,
//! and Leray-projected. Around the solver sit:
//!
//! - [`ledger`]: energy budget, decay diagnostics and the Duhamel split,
//! - [`oracles`]: solver-independent checks of the pointwise and algebraic
//!   inequalities behind the stability estimates,
//! - [`harness`]: configuration, checkpoints and the experiment drivers
//!   (twin runs, time-shift continuity, large-time decay, refinement).
//!
//! Runnable walkthroughs of each capability live in `examples/`.

// `!(x > 0.0)` rejects NaN along with the out-of-range values; component
// loops index several parallel arrays at once.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dynamics;
pub mod fft;
pub mod field;
pub mod grid;
pub mod harness;
pub mod initial;
pub mod ledger;
pub mod oracles;
pub mod params;
pub mod spectral;

pub use dynamics::{SolverState, StepperConfig};
pub use field::{PhysicalField, ScalarSpectral, SpectralField};
pub use grid::{make_grid, GridSpec};
pub use params::PhysParams;

pub use rustfft::num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("step refused at t = {t}: dt = {dt} exceeds stability limit {limit}")]
    Cfl { t: f64, dt: f64, limit: f64 },
    #[error("non-finite coefficient at t = {t} (step {step}, last energy {energy})")]
    NonFinite { t: f64, step: u64, energy: f64 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
