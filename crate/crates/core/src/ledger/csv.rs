use std::io::Write;

use super::{DecayDiagnostics, EnergyRecord};
use crate::Result;

pub const CSV_HEADER: &str =
    "t,l2_sq,cum_visc,cum_damp,residual,hminus2,w1_l2,w2_l2,lbeta_E1,lbeta_E2,heat_l2,f_hminus2,g_hminus2,linf";

/// One snapshot of the ledger: the energy record plus decay diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesRow {
    pub energy: EnergyRecord,
    pub decay: DecayDiagnostics,
}

impl SeriesRow {
    pub fn values(&self) -> [f64; 14] {
        let (e, d) = (&self.energy, &self.decay);
        [
            e.t,
            e.l2_sq,
            e.cum_visc,
            e.cum_damp,
            e.residual,
            d.hminus2,
            d.w1_l2,
            d.w2_l2,
            d.lbeta_e1,
            d.lbeta_e2,
            d.heat_l2,
            d.f_hminus2,
            d.g_hminus2,
            d.linf,
        ]
    }
}

/// Writes the header and one line per row, every value as `{:.17e}`.
pub fn write_series_csv<W: Write>(mut out: W, rows: &[SeriesRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let line: Vec<String> = row.values().iter().map(|v| format!("{v:.17e}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}
