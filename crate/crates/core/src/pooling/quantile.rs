//! Quantile-transformation poolers: the p-values are mapped through an upper
//! quantile function, summed, and referred to the null distribution of the
//! sum. Inputs are assumed to lie in [0, 1]; wrap raw data in
//! [`PValues`](super::PValues) to validate it.

use crate::error::{Error, Result};
use crate::specfun::incgamma::{gamma_pq, inv_gamma_pq_ln, ln_gamma_pq_t};
use crate::specfun::{chi2_sf_raw, normal_sf, normal_upper_quantile};

use super::order::tippett;

enum Sum {
    Finite(f64),
    PlusInf,
    MinusInf,
}

/// Sum in ascending order, so that the result does not depend on the order
/// of the inputs.
pub(crate) fn sorted_sum(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

/// Weighted sum of transformed values with the sentinel rules: any +∞
/// summand wins, otherwise any −∞ summand wins.
fn sentinel_sum(values: impl Iterator<Item = f64>) -> Sum {
    let mut finite = Vec::new();
    let mut minus = false;
    for v in values {
        if v == f64::INFINITY {
            return Sum::PlusInf;
        }
        if v == f64::NEG_INFINITY {
            minus = true;
        } else {
            finite.push(v);
        }
    }
    if minus {
        Sum::MinusInf
    } else {
        Sum::Finite(sorted_sum(finite))
    }
}

pub(crate) fn check_weights(weights: &[f64], m: usize) -> Result<()> {
    if weights.len() != m {
        return Err(Error::domain(format!(
            "expected {m} weights, got {}",
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::domain(format!("weights must be finite and > 0, got {w}")));
    }
    Ok(())
}

/// Generic quantile pooler 1 − F_M(Σ c_i F⁻¹(1 − p_i)).
///
/// `upper_quantile(p)` must return F⁻¹(1 − p) and `sum_sf(s)` the null
/// survival function of the weighted sum. An infinite upper quantile (p = 0)
/// forces the result to 0; otherwise a −∞ one (p = 1) forces it to 1.
pub fn quantile_pool<U, S>(
    p: &[f64],
    upper_quantile: U,
    sum_sf: S,
    weights: Option<&[f64]>,
) -> Result<f64>
where
    U: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    let sum = match weights {
        Some(c) => {
            check_weights(c, p.len())?;
            sentinel_sum(p.iter().zip(c).map(|(&pi, &ci)| ci * upper_quantile(pi)))
        }
        None => sentinel_sum(p.iter().map(|&pi| upper_quantile(pi))),
    };
    Ok(finish(sum, sum_sf))
}

fn finish(sum: Sum, sum_sf: impl Fn(f64) -> f64) -> f64 {
    match sum {
        Sum::PlusInf => 0.0,
        Sum::MinusInf => 1.0,
        Sum::Finite(s) => sum_sf(s).clamp(0.0, 1.0),
    }
}

/// Stouffer's pooler 1 − Φ(Σ Φ⁻¹(1 − p_i)/√M).
pub fn stouffer_pool(p: &[f64]) -> f64 {
    let scale = (p.len() as f64).sqrt();
    finish(sentinel_sum(p.iter().map(|&pi| normal_upper_quantile(pi))), |s| {
        normal_sf(s / scale)
    })
}

/// Weighted Stouffer pooler 1 − Φ(Σ c_i Φ⁻¹(1 − p_i)/√Σc_i²).
pub fn stouffer_pool_weighted(p: &[f64], weights: &[f64]) -> Result<f64> {
    check_weights(weights, p.len())?;
    let scale = weights.iter().map(|c| c * c).sum::<f64>().sqrt();
    quantile_pool(p, normal_upper_quantile, |s| normal_sf(s / scale), Some(weights))
}

/// Fisher's pooler 1 − F_χ(−2 Σ ln p_i; 2M).
pub fn fisher_pool(p: &[f64]) -> f64 {
    let df = 2.0 * p.len() as f64;
    finish(sentinel_sum(p.iter().map(|&pi| -2.0 * pi.ln())), |s| {
        chi2_sf_raw(s, df)
    })
}

/// Pearson's pooler F_χ(−2 Σ ln(1 − p_i); 2M).
pub fn pearson_pool(p: &[f64]) -> f64 {
    if p.contains(&1.0) {
        return 1.0;
    }
    let s = sorted_sum(p.iter().map(|&pi| -2.0 * (-pi).ln_1p()).collect());
    gamma_pq(p.len() as f64, 0.5 * s).0
}

/// Gamma pooler 1 − G_{Mk,θ}(Σ G⁻¹_{k,θ}(1 − p_i)).
pub fn gamma_pool(p: &[f64], k: f64, theta: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0 && theta.is_finite() && theta > 0.0) {
        return Err(Error::domain(format!(
            "gamma pooler needs k, θ > 0, got k = {k}, θ = {theta}"
        )));
    }
    Ok(gamma_pool_raw(p, k, theta))
}

/// θ cancels between the transform and the null of the sum, so the gamma
/// pooler only depends on the shape.
pub(crate) fn gamma_pool_raw(p: &[f64], k: f64, _theta: f64) -> f64 {
    gamma_shape_pool(p, k)
}

/// 1 − P(Mk, Σ y_i) with y_i = P⁻¹(k, 1 − p_i), the unit-scale gamma pooler.
///
/// For small shapes the y_i underflow long before the p-values approach 1,
/// so the transforms are kept as logarithms and summed with log-sum-exp.
fn gamma_shape_pool(p: &[f64], k: f64) -> f64 {
    let mut ln_y = Vec::with_capacity(p.len());
    for &pi in p {
        let t = inv_gamma_pq_ln(k, 1.0 - pi, pi);
        if t == f64::INFINITY {
            return 0.0;
        }
        ln_y.push(t);
    }
    ln_y.sort_by(f64::total_cmp);
    let top = ln_y.last().copied().unwrap_or(f64::NEG_INFINITY);
    if top == f64::NEG_INFINITY {
        return 1.0;
    }
    let ln_sum = top + ln_y.iter().map(|&t| (t - top).exp()).sum::<f64>().ln();
    ln_gamma_pq_t(k * p.len() as f64, ln_sum).1.exp().clamp(0.0, 1.0)
}

/// χ²_κ pooler 1 − F_χ(Σ F_χ⁻¹(1 − p_i; κ); Mκ). κ = 0 is Tippett's pooler,
/// the κ → 0 limit.
pub fn chi_pool(p: &[f64], kappa: f64) -> Result<f64> {
    if kappa == 0.0 {
        return Ok(tippett(p));
    }
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::domain(format!("κ must be finite and ≥ 0, got {kappa}")));
    }
    Ok(chi_pool_raw(p, kappa))
}

pub(crate) fn chi_pool_raw(p: &[f64], kappa: f64) -> f64 {
    // F_χ⁻¹(·; κ) is twice the unit gamma quantile with shape κ/2
    gamma_shape_pool(p, 0.5 * kappa)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stouffer_examples() {
        assert!((stouffer_pool(&[0.5, 0.5, 0.5]) - 0.5).abs() < 1e-15);
        // 1 − Φ(2·1.959964/√2) = 1 − Φ(2.771808)
        let z = 2.0 * 1.959_963_984_540_054 / 2f64.sqrt();
        let want = normal_sf(z);
        assert!((stouffer_pool(&[0.025, 0.025]) - want).abs() < 1e-15);
        assert!((want - 0.00279).abs() < 5e-6);
    }

    #[test]
    fn sentinels() {
        assert_eq!(stouffer_pool(&[0.0, 1.0]), 0.0);
        assert_eq!(stouffer_pool(&[0.3, 1.0]), 1.0);
        assert_eq!(fisher_pool(&[0.0, 0.5]), 0.0);
        assert_eq!(pearson_pool(&[1.0, 0.5]), 1.0);
        assert_eq!(chi_pool(&[0.0, 0.9], 3.0).unwrap(), 0.0);
        assert_eq!(chi_pool(&[1.0, 1.0], 3.0).unwrap(), 1.0);
    }

    #[test]
    fn uniform_weights_match_unweighted() {
        let p = [0.01, 0.2, 0.7];
        let a = stouffer_pool_weighted(&p, &[2.0, 2.0, 2.0]).unwrap();
        assert!((a - stouffer_pool(&p)).abs() < 1e-15);
        assert!(stouffer_pool_weighted(&p, &[1.0, 2.0]).is_err());
        assert!(stouffer_pool_weighted(&p, &[1.0, 0.0, 1.0]).is_err());
    }
}
