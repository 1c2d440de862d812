use alloc::vec::Vec;

use super::periods::PeriodSample;
use crate::grid::{order_from, Residual};
use crate::{Error, Result};

/// Holomorphy and closedness residuals of tabulated periods.
///
/// The Cauchy–Riemann residual is `|J_x + i J_y|` (twice `|dJ/d conj(xi)|`);
/// the closedness residual is the curl of `Re(J dxi)`. Both are maxima over
/// interior nodes and all cycles, and are reported independently.
#[derive(Clone, Debug, PartialEq)]
pub struct CrReport {
    pub cr_residual: f64,
    pub closedness_residual: f64,
    /// Per-cycle `(cr, closedness)` residuals.
    pub per_cycle: Vec<(f64, f64)>,
    /// Observed orders between a grid and its refinement, when available.
    pub cr_order: Option<f64>,
    pub closedness_order: Option<f64>,
}

pub fn cauchy_riemann_check(sample: &PeriodSample) -> Result<CrReport> {
    let per_cycle: Vec<(f64, f64)> = sample
        .periods
        .iter()
        .map(|p| (Residual::CauchyRiemann.max(&sample.grid, p), Residual::Closedness.max(&sample.grid, p)))
        .collect();
    Ok(CrReport {
        cr_residual: per_cycle.iter().map(|r| r.0).fold(0.0, f64::max),
        closedness_residual: per_cycle.iter().map(|r| r.1).fold(0.0, f64::max),
        per_cycle,
        cr_order: None,
        closedness_order: None,
    })
}

/// As [`cauchy_riemann_check`] on `fine`, with convergence orders measured
/// against `coarse` at the shared nodes.
pub fn cauchy_riemann_refined(coarse: &PeriodSample, fine: &PeriodSample) -> Result<CrReport> {
    if !fine.grid.is_refinement_of(&coarse.grid) || coarse.cycles != fine.cycles {
        return Err(Error::Mismatch("samples are not a grid and its refinement over the same cycles".into()));
    }
    let mut report = cauchy_riemann_check(fine)?;
    let (mut cc, mut cf, mut kc, mut kf) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (pc, pf) in coarse.periods.iter().zip(&fine.periods) {
        for (i, j) in coarse.grid.interior() {
            cc = cc.max(Residual::CauchyRiemann.at(&coarse.grid, pc, i, j));
            cf = cf.max(Residual::CauchyRiemann.at(&fine.grid, pf, 2 * i, 2 * j));
            kc = kc.max(Residual::Closedness.at(&coarse.grid, pc, i, j));
            kf = kf.max(Residual::Closedness.at(&fine.grid, pf, 2 * i, 2 * j));
        }
    }
    report.cr_order = order_from(cc, cf);
    report.closedness_order = order_from(kc, kf);
    Ok(report)
}
