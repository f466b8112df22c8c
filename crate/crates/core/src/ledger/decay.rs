use crate::dynamics::SolverState;
use crate::field::PhysicalField;
use crate::params::DECAY_BETA;
use crate::spectral::{frequency_split, sobolev_norm, to_physical};
use crate::{Error, PhysParams, Result};

use super::duhamel::duhamel_split;
use super::EnergyRecord;

/// Instantaneous space integrals behind the time accumulators.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Integrands {
    e1: f64,
    e2: f64,
    damping: f64,
    l10_3: f64,
    grad: f64,
}

/// Trapezoidal time integrals carried from snapshot to snapshot.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpacetimeAccumulators {
    /// `int int |u|^(beta+1)`.
    pub damping: f64,
    /// `int ||u||_{L^(10/3)}^(10/3)`.
    pub l10_3: f64,
    /// `int ||grad u||^2`.
    pub grad: f64,
    /// `int int |u|^beta` without the `E1`/`E2` split.
    pub lbeta_total: f64,
    /// Largest `||u||_{10/3}^{10/3} / (||u||^{4/3} ||grad u||^2)` seen so far.
    pub embedding_ratio: f64,
    last: Integrands,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayDiagnostics {
    pub t: f64,
    pub l2: f64,
    pub hminus2: f64,
    /// `||1_{|xi|<1} u||` and `||1_{|xi|>=1} u||`.
    pub w1_l2: f64,
    pub w2_l2: f64,
    /// `int int |u|^beta` over `{|u| <= 1}` and `{|u| > 1}`.
    pub lbeta_e1: f64,
    pub lbeta_e2: f64,
    /// Duhamel channel norms; NaN when the state does not track them.
    pub heat_l2: f64,
    pub f_hminus2: f64,
    pub g_hminus2: f64,
    pub duhamel_error: f64,
    pub linf: f64,
    pub accum: SpacetimeAccumulators,
}

fn integrands(phys: &PhysicalField, grad: f64, beta: f64) -> Integrands {
    let vol = phys.grid().cell_volume();
    let mut out = Integrands {
        grad,
        ..Integrands::default()
    };
    for idx in 0..phys.grid().len() {
        let m = phys.magnitude_at(idx);
        if m == 0.0 {
            continue;
        }
        let mb = m.powf(beta);
        if m <= 1.0 {
            out.e1 += mb;
        } else {
            out.e2 += mb;
        }
        out.damping += mb * m;
        out.l10_3 += m.powf(10.0 / 3.0);
    }
    out.e1 *= vol;
    out.e2 *= vol;
    out.damping *= vol;
    out.l10_3 *= vol;
    out
}

fn embedding_ratio(i: &Integrands, l2_sq: f64) -> f64 {
    let denom = l2_sq.powf(2.0 / 3.0) * i.grad;
    if denom > 0.0 {
        i.l10_3 / denom
    } else {
        0.0
    }
}

/// `(E1, E2)` increments of `int int |u|^beta` for samples held over `dt`.
pub fn lbeta_increment(samples: &PhysicalField, beta: f64, dt: f64) -> (f64, f64) {
    let i = integrands(samples, 0.0, beta);
    (i.e1 * dt, i.e2 * dt)
}

/// Diagnostics at `state`, continuing the time integrals of `prev` (or
/// starting them when `prev` is `None`).
pub fn decay_snapshot(
    state: &SolverState,
    prev: Option<&DecayDiagnostics>,
) -> Result<DecayDiagnostics> {
    let u = &state.u;
    let beta = state.params.beta;
    let phys = to_physical(u);
    let l2_sq = u.l2_norm_sq();
    let now = integrands(&phys, u.grad_norm_sq(), beta);
    let (w1, w2) = frequency_split(u);
    let duhamel = duhamel_split(state).ok();

    let (mut accum, mut e1, mut e2) = (SpacetimeAccumulators::default(), 0.0, 0.0);
    if let Some(p) = prev {
        if !(state.t > p.t) {
            return Err(Error::InvalidArgument(format!(
                "decay snapshots must advance in time: {} after {}",
                state.t, p.t
            )));
        }
        let half = 0.5 * (state.t - p.t);
        let last = p.accum.last;
        accum = p.accum;
        accum.damping += half * (last.damping + now.damping);
        accum.l10_3 += half * (last.l10_3 + now.l10_3);
        accum.grad += half * (last.grad + now.grad);
        let d1 = half * (last.e1 + now.e1);
        let d2 = half * (last.e2 + now.e2);
        e1 = p.lbeta_e1 + d1;
        e2 = p.lbeta_e2 + d2;
        accum.lbeta_total += half * (last.e1 + last.e2 + now.e1 + now.e2);
    }
    accum.embedding_ratio = accum.embedding_ratio.max(embedding_ratio(&now, l2_sq));
    accum.last = now;

    Ok(DecayDiagnostics {
        t: state.t,
        l2: l2_sq.sqrt(),
        hminus2: sobolev_norm(u, -2.0, false),
        w1_l2: w1.l2_norm(),
        w2_l2: w2.l2_norm(),
        lbeta_e1: e1,
        lbeta_e2: e2,
        heat_l2: duhamel.map_or(f64::NAN, |d| d.heat_l2),
        f_hminus2: duhamel.map_or(f64::NAN, |d| d.f_hminus2),
        g_hminus2: duhamel.map_or(f64::NAN, |d| d.g_hminus2),
        duhamel_error: duhamel.map_or(f64::NAN, |d| d.reconstruction_error),
        linf: phys.max_magnitude(),
        accum,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LbetaReport {
    pub l1: f64,
    pub l2: f64,
    /// `C ||u0||^{4/3} int ||grad u||^2 + int int |u|^(beta+1)` with the
    /// observed embedding ratio as `C`.
    pub majorant: f64,
    pub embedding_constant: f64,
    pub finite: bool,
    pub majorant_holds: bool,
    /// Share of `L1 + L2` gained over the final tenth of the samples.
    pub final_decile_share: f64,
    /// Whether per-interval increments of `L1 + L2` never grew over the
    /// second half of the samples.
    pub tail_increments_decreasing: bool,
    pub plateaued: bool,
}

/// Share of the total increment allowed in the final decile.
pub const PLATEAU_SHARE: f64 = 0.01;

pub fn lbeta_spacetime_report(
    diags: &[DecayDiagnostics],
    series: &[EnergyRecord],
    params: &PhysParams,
) -> Result<LbetaReport> {
    if params.beta < DECAY_BETA - 1e-12 {
        return Err(Error::InvalidParams(format!(
            "the L^beta space-time bound needs beta >= 10/3, got {}",
            params.beta
        )));
    }
    let last = diags
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty decay series".into()))?;
    let u0_sq = series
        .first()
        .map_or_else(|| diags[0].l2 * diags[0].l2, |r| r.initial_l2_sq);
    let (l1, l2) = (last.lbeta_e1, last.lbeta_e2);
    let c = last.accum.embedding_ratio;
    let majorant = c * u0_sq.powf(2.0 / 3.0) * last.accum.grad + last.accum.damping;
    let total = l1 + l2;

    let cum: Vec<f64> = diags.iter().map(|d| d.lbeta_e1 + d.lbeta_e2).collect();
    let n = cum.len();
    let decile = if n > 1 { n - 1 - (n / 10).max(1) } else { 0 };
    let final_decile_share = if total > 0.0 {
        (total - cum[decile]) / total
    } else {
        0.0
    };
    let increments: Vec<f64> = cum.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &increments[increments.len() / 2..];
    let tail_increments_decreasing = tail
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300);
    let finite = [l1, l2, majorant].iter().all(|x| x.is_finite());
    Ok(LbetaReport {
        l1,
        l2,
        majorant,
        embedding_constant: c,
        finite,
        majorant_holds: total <= majorant * (1.0 + 1e-12),
        final_decile_share,
        tail_increments_decreasing,
        plateaued: final_decile_share <= PLATEAU_SHARE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run, Integrator, RunOptions, StepperConfig};
    use crate::grid::make_grid;
    use crate::initial::random_solenoidal;
    use crate::SpectralField;
    use crate::{Complex64, PhysicalField};
    use std::f64::consts::PI;

    #[test]
    fn zero_field_has_zero_diagnostics() {
        let g = make_grid(8, 8.0 * PI, 2.0 / 3.0).unwrap();
        let p = PhysParams::new(1.0, 1.0, DECAY_BETA).unwrap();
        let s = SolverState::new(SpectralField::zeros(g), p).unwrap();
        let d0 = decay_snapshot(&s, None).unwrap();
        let mut s1 = s.clone();
        s1.t = 1.0;
        let d1 = decay_snapshot(&s1, Some(&d0)).unwrap();
        assert_eq!(
            (d1.lbeta_e1, d1.lbeta_e2, d1.hminus2, d1.l2),
            (0.0, 0.0, 0.0, 0.0)
        );
        let rep = lbeta_spacetime_report(&[d0, d1], &[], &p).unwrap();
        assert_eq!((rep.l1, rep.l2), (0.0, 0.0));
        assert!(rep.finite && rep.plateaued);
    }

    #[test]
    fn constant_amplitude_increment() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let samples = PhysicalField::from_fn(g, |_, _, _| [0.0, 2.0, 0.0]);
        let (beta, dt) = (3.5, 0.01);
        let (e1, e2) = lbeta_increment(&samples, beta, dt);
        assert_eq!(e1, 0.0);
        let expected = 2f64.powf(beta) * g.volume() * dt;
        assert!((e2 - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn small_fields_never_enter_e2() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let samples = PhysicalField::from_fn(g, |x, _, _| [0.9 * x.sin(), 0.0, 0.0]);
        assert_eq!(lbeta_increment(&samples, 4.0, 1.0).1, 0.0);
    }

    #[test]
    fn unit_shell_hminus2_is_half_l2() {
        let g = make_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let mut u = SpectralField::zeros(g);
        let z = Complex64::new(0.0, 0.0);
        u.set_mode_pair([0, 1, 0], [Complex64::new(0.3, -0.2), z, z])
            .unwrap();
        let s = SolverState::new(u, PhysParams::new(1.0, 1.0, 4.0).unwrap()).unwrap();
        let d = decay_snapshot(&s, None).unwrap();
        assert!((d.hminus2 - 0.5 * d.l2).abs() < 1e-15);
    }

    #[test]
    fn split_and_accumulators_are_consistent() {
        let g = make_grid(16, 8.0 * PI, 2.0 / 3.0).unwrap();
        let p = PhysParams::new(1.0, 1.0, 4.0).unwrap();
        let u = random_solenoidal(&g, 5, 200.0).unwrap();
        let s = SolverState::new(u, p).unwrap().with_duhamel();
        let integ = Integrator::new(&g, p, StepperConfig::new(1e-3).unwrap());
        let mut diags: Vec<DecayDiagnostics> = Vec::new();
        let mut hook = |st: &SolverState| {
            let d = decay_snapshot(st, diags.last())?;
            diags.push(d);
            Ok(())
        };
        run(s, &integ, RunOptions::new(0.1, 5), &mut [&mut hook]).unwrap();
        for d in &diags {
            let l2_sq = d.l2 * d.l2;
            assert!((d.w1_l2.powi(2) + d.w2_l2.powi(2) - l2_sq).abs() <= 1e-10 * l2_sq);
            let split = d.lbeta_e1 + d.lbeta_e2;
            assert!((split - d.accum.lbeta_total).abs() <= 1e-12 * d.accum.lbeta_total.max(1e-300));
            assert!(d.hminus2 <= d.l2);
            assert!(d.duhamel_error < 1e-8);
        }
        let rep = lbeta_spacetime_report(&diags, &[], &p).unwrap();
        assert!(rep.finite && rep.majorant_holds && rep.l1 > 0.0);
        assert!(
            lbeta_spacetime_report(&diags, &[], &PhysParams::new(1.0, 1.0, 3.2).unwrap()).is_err()
        );
    }
}
