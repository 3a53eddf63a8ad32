//! Order-statistic poolers.

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

/// Tippett's pooler 1 − (1 − p_(1))^M.
pub fn tippett(p: &[f64]) -> f64 {
    let min = p.iter().copied().fold(f64::INFINITY, f64::min);
    -((p.len() as f64) * (-min).ln_1p()).exp_m1()
}

/// P(Bin(m, x) ≥ k), summed in log space from the largest term outwards.
pub(crate) fn binomial_upper_tail(m: usize, k: usize, x: f64) -> f64 {
    debug_assert!(k >= 1 && k <= m);
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if k == 1 {
        return -((m as f64) * (-x).ln_1p()).exp_m1();
    }
    let mf = m as f64;
    let ln_x = x.ln();
    let ln_1mx = (-x).ln_1p();
    let ln_choose_m = ln_gamma(mf + 1.0);
    let ln_term = |l: usize| {
        let lf = l as f64;
        ln_choose_m - ln_gamma(lf + 1.0) - ln_gamma(mf - lf + 1.0) + lf * ln_x + (mf - lf) * ln_1mx
    };
    let terms: Vec<f64> = (k..=m).map(ln_term).collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - top).exp()).sum();
    (top + sum.ln()).exp().min(1.0)
}

/// Order-statistic pooler Σ_{l=k}^{M} C(M,l) p_(k)^l (1 − p_(k))^{M−l}, the
/// probability that the k-th smallest of M uniforms is at most p_(k).
pub fn ord_pool(p: &[f64], k: usize) -> Result<f64> {
    let m = p.len();
    if k < 1 || k > m {
        return Err(Error::domain(format!("order k must lie in 1..={m}, got {k}")));
    }
    if k == 1 {
        return Ok(tippett(p));
    }
    let mut sorted = p.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(binomial_upper_tail(m, k, sorted[k - 1]))
}
