//! Picking the tests that contribute most to a χ²_κ pooled p-value.

use crate::error::{Error, Result};
use crate::sampling::round_half_up;

/// Indices of the round(M·η*) tests with the largest F_χ⁻¹(1 − p_i; κ_min).
///
/// The transform is decreasing in p_i, so these are the smallest p-values;
/// ordering by p directly avoids ties where the transform saturates. Equal
/// p-values are broken by lower index. The result is in ascending p order.
pub fn select_tests(p: &[f64], kappa_min: f64, eta_star: f64) -> Result<Vec<usize>> {
    if !(kappa_min.is_finite() && kappa_min > 0.0) {
        return Err(Error::domain(format!("κ_min must be finite and > 0, got {kappa_min}")));
    }
    if !(eta_star > 0.0 && eta_star <= 1.0) {
        return Err(Error::domain(format!("η* must lie in (0, 1], got {eta_star}")));
    }
    let count = round_half_up(p.len() as f64 * eta_star).min(p.len());
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&i, &j| p[i].total_cmp(&p[j]).then(i.cmp(&j)));
    order.truncate(count);
    Ok(order)
}
