//! Max-power masks and the alternative-frequency atlas built from them.

use crate::error::{Error, Result};
use crate::specfun::normal_upper_quantile;

use super::smooth::Grid2;

/// Two-proportion z statistic √n(p₁ − p₂)/√(2p̄(1 − p̄)), p̄ = (p₁ + p₂)/2.
/// Equal proportions (including p̄ ∈ {0, 1}) give 0.
pub fn two_proportion_z(p1: f64, p2: f64, n: usize) -> f64 {
    let diff = p1 - p2;
    if diff == 0.0 {
        return 0.0;
    }
    let pbar = 0.5 * (p1 + p2);
    let var = 2.0 * pbar * (1.0 - pbar);
    if var <= 0.0 {
        return 0.0;
    }
    (n as f64).sqrt() * diff / var.sqrt()
}

/// Flags, per cell, every method whose power is not significantly below the
/// cell maximum by a two-sided two-proportion z-test at `confidence`.
/// NaN cells (unreachable alternatives) are never flagged.
pub fn max_power_mask(powers: &[Grid2<f64>], n_sim: usize, confidence: f64) -> Result<Vec<Grid2<bool>>> {
    let first = powers
        .first()
        .ok_or_else(|| Error::domain("at least one power matrix is required"))?;
    if powers.iter().any(|p| !p.same_shape(first)) {
        return Err(Error::domain("power matrices must share one shape"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::domain(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    let z_crit = normal_upper_quantile(0.5 * (1.0 - confidence));
    let mut masks = vec![Grid2::filled(first.rows, first.cols, false); powers.len()];
    for idx in 0..first.data.len() {
        let best = powers
            .iter()
            .map(|p| p.data[idx])
            .filter(|v| !v.is_nan())
            .fold(f64::NEG_INFINITY, f64::max);
        if best == f64::NEG_INFINITY {
            continue;
        }
        for (mask, p) in masks.iter_mut().zip(powers) {
            let v = p.data[idx];
            if !v.is_nan() && two_proportion_z(best, v, n_sim) < z_crit {
                mask.data[idx] = true;
            }
        }
    }
    Ok(masks)
}

/// Cells where every method, at every w, has power of at least `hi` or at
/// most `lo`: the saturated corners where all methods tie and no method can
/// be singled out.
pub fn corner_mask(powers_by_w: &[Vec<Grid2<f64>>], lo: f64, hi: f64) -> Result<Grid2<bool>> {
    let first = powers_by_w
        .first()
        .and_then(|l| l.first())
        .ok_or_else(|| Error::domain("at least one power matrix is required"))?;
    let (rows, cols) = (first.rows, first.cols);
    if powers_by_w.iter().flatten().any(|g| g.rows != rows || g.cols != cols) {
        return Err(Error::domain("power matrices must share one shape"));
    }
    let mut mask = Grid2::filled(rows, cols, false);
    for idx in 0..rows * cols {
        let mut all_hi = true;
        let mut all_lo = true;
        for g in powers_by_w.iter().flatten() {
            let v = g.data[idx];
            all_hi &= v >= hi;
            all_lo &= v <= lo;
        }
        mask.data[idx] = all_hi || all_lo;
    }
    Ok(mask)
}

/// Per-(η, ln D) count of w settings in which one method reached maximum
/// power, with row and column sums as marginal histograms.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMap {
    pub counts: Grid2<u32>,
    pub row_sums: Vec<u32>,
    pub col_sums: Vec<u32>,
}

/// Sums the masks of one method across w layers. Cells flagged in `corner`
/// are set to zero.
pub fn alt_frequency_map(masks_by_w: &[Grid2<bool>], corner: Option<&Grid2<bool>>) -> Result<FrequencyMap> {
    let first = masks_by_w
        .first()
        .ok_or_else(|| Error::domain("at least one mask layer is required"))?;
    if masks_by_w.iter().any(|m| !m.same_shape(first)) || corner.is_some_and(|c| !c.same_shape(first)) {
        return Err(Error::domain("mask layers must share one shape"));
    }
    let mut counts = Grid2::filled(first.rows, first.cols, 0u32);
    for layer in masks_by_w {
        for (c, &flag) in counts.data.iter_mut().zip(&layer.data) {
            *c += flag as u32;
        }
    }
    if let Some(corner) = corner {
        for (c, &masked) in counts.data.iter_mut().zip(&corner.data) {
            if masked {
                *c = 0;
            }
        }
    }
    let row_sums = (0..counts.rows)
        .map(|r| (0..counts.cols).map(|c| *counts.get(r, c)).sum())
        .collect();
    let col_sums = (0..counts.cols)
        .map(|c| (0..counts.rows).map(|r| *counts.get(r, c)).sum())
        .collect();
    Ok(FrequencyMap {
        counts,
        row_sums,
        col_sums,
    })
}
