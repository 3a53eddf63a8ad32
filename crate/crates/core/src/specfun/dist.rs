//! Chi-squared and gamma distributions on top of the incomplete gamma
//! function. Every function has an upper-tail twin (`*_sf`, `*_isf`) so that
//! small tail probabilities never pass through `1 − p`.

use crate::error::{Error, Result};

use super::incgamma::{check_shape, gamma_pq, inv_gamma_pq};

fn check_x(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        Err(Error::domain(format!("x must be ≥ 0, got {x}")))
    } else {
        Ok(())
    }
}

fn check_prob(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::domain(format!("probability must lie in [0, 1], got {q}")))
    }
}

/// Upper tail of χ²_κ, unchecked.
pub(crate) fn chi2_sf_raw(x: f64, kappa: f64) -> f64 {
    gamma_pq(0.5 * kappa, 0.5 * x).1
}

/// Upper quantile of χ²_κ (x with P(X > x) = p), unchecked.
pub(crate) fn chi2_isf_raw(p: f64, kappa: f64) -> f64 {
    2.0 * inv_gamma_pq(0.5 * kappa, 1.0 - p, p)
}

/// CDF of the chi-squared distribution with real degrees of freedom `kappa`.
pub fn chi2_cdf(x: f64, kappa: f64) -> Result<f64> {
    check_shape(kappa)?;
    check_x(x)?;
    Ok(gamma_pq(0.5 * kappa, 0.5 * x).0)
}

/// Survival function 1 − F_χ(x; κ).
pub fn chi2_sf(x: f64, kappa: f64) -> Result<f64> {
    check_shape(kappa)?;
    check_x(x)?;
    Ok(chi2_sf_raw(x, kappa))
}

/// Quantile F_χ⁻¹(q; κ). Returns +∞ at q = 1.
pub fn chi2_quantile(q: f64, kappa: f64) -> Result<f64> {
    check_shape(kappa)?;
    check_prob(q)?;
    Ok(2.0 * inv_gamma_pq(0.5 * kappa, q, 1.0 - q))
}

/// Upper quantile F_χ⁻¹(1 − p; κ), computed without forming 1 − p.
/// Returns +∞ at p = 0.
pub fn chi2_isf(p: f64, kappa: f64) -> Result<f64> {
    check_shape(kappa)?;
    check_prob(p)?;
    Ok(chi2_isf_raw(p, kappa))
}

fn check_gamma(k: f64, theta: f64) -> Result<()> {
    check_shape(k)?;
    if theta.is_finite() && theta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("scale must be finite and > 0, got {theta}")))
    }
}

/// CDF of the gamma distribution with shape `k` and scale `theta`.
pub fn gamma_cdf(x: f64, k: f64, theta: f64) -> Result<f64> {
    check_gamma(k, theta)?;
    check_x(x)?;
    Ok(gamma_pq(k, x / theta).0)
}

/// Survival function of the gamma distribution.
pub fn gamma_sf(x: f64, k: f64, theta: f64) -> Result<f64> {
    check_gamma(k, theta)?;
    check_x(x)?;
    Ok(gamma_pq(k, x / theta).1)
}

/// Quantile of the gamma distribution. Returns +∞ at q = 1.
pub fn gamma_quantile(q: f64, k: f64, theta: f64) -> Result<f64> {
    check_gamma(k, theta)?;
    check_prob(q)?;
    Ok(theta * inv_gamma_pq(k, q, 1.0 - q))
}

/// Upper quantile G⁻¹(1 − p) of the gamma distribution.
pub fn gamma_isf(p: f64, k: f64, theta: f64) -> Result<f64> {
    check_gamma(k, theta)?;
    check_prob(p)?;
    Ok(theta * inv_gamma_pq(k, 1.0 - p, p))
}
