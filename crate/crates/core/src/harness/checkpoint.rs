//! Binary checkpoints.
//!
//! Layout, all little-endian: magic `NSD1`; `n_modes` as `u64`; `box_length`,
//! `cutoff_radius`, `nu`, `alpha`, `beta`, `t` as `f64`; then the three
//! velocity components, each the full `N^3` coefficient array in the grid's
//! native order with `(re, im)` pairs as `f64`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::dynamics::SolverState;
use crate::{Complex64, Error, GridSpec, PhysParams, Result, SpectralField};

pub const MAGIC: &[u8; 4] = b"NSD1";
const HEADER_LEN: usize = 4 + 8 + 6 * 8;

pub fn encode_checkpoint(state: &SolverState) -> Vec<u8> {
    let g = state.grid();
    let p = &state.params;
    let mut out = Vec::with_capacity(HEADER_LEN + 3 * g.len() * 16);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(g.n_modes() as u64).to_le_bytes());
    for x in [g.box_length(), g.cutoff_radius(), p.nu, p.alpha, p.beta, state.t] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for c in state.u.components() {
        for z in c {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<SolverState> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Checkpoint(format!("truncated header: {} bytes", bytes.len())));
    }
    let n = u64::from_le_bytes(bytes[4..12].try_into().expect("8 bytes"));
    let h: Vec<f64> = (0..6).map(|i| f64_at(bytes, 12 + 8 * i)).collect();
    let n = usize::try_from(n).ok().filter(|&n| n <= 1 << 12).ok_or_else(|| Error::Checkpoint(format!("implausible n_modes {n}")))?;
    let grid = GridSpec::from_parts(n, h[0], h[1]).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let params = PhysParams::new(h[2], h[3], h[4]).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let expected = HEADER_LEN + 3 * grid.len() * 16;
    if bytes.len() != expected {
        return Err(Error::Checkpoint(format!(
            "payload has {} bytes, expected {}",
            bytes.len(),
            expected
        )));
    }
    let mut at = HEADER_LEN;
    let mut comp = || -> Vec<Complex64> {
        (0..grid.len())
            .map(|_| {
                let z = Complex64::new(f64_at(bytes, at), f64_at(bytes, at + 8));
                at += 16;
                z
            })
            .collect()
    };
    let comps = [comp(), comp(), comp()];
    let u = SpectralField::from_components(grid, comps)?;
    SolverState::at_time(u, params, h[5]).map_err(|e| Error::Checkpoint(format!("invalid state: {e}")))
}

pub fn write_checkpoint(state: &SolverState, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&encode_checkpoint(state))?;
    w.flush()?;
    Ok(())
}

pub fn read_checkpoint(path: impl AsRef<Path>) -> Result<SolverState> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    decode_checkpoint(&bytes)
}
