//! Central and marginal rejection levels and the centrality quotient.
//!
//! The central level p_c is the largest common value all M p-values can take
//! while the pooled p-value still rejects at α. The marginal level p_r is the
//! largest single p-value that still rejects when every other p-value equals
//! `b` (usually 1). The quotient (p_c − p_r)/p_c runs from 0 (rejects on the
//! minimum alone, like Tippett) to 1 (needs evidence in many tests, like
//! Stouffer).

use crate::error::{Error, Result};
use crate::pooling::{MethodKind, MethodSpec, NullQuantileTable};
use crate::specfun::incgamma::{inv_gamma_pq_ln, ln_gamma_pq_t};
use crate::specfun::{chi2_isf_raw, chi2_sf_raw, normal_sf, normal_upper_quantile};

/// Default bisection tolerance in probability.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Rejection levels of a pooler at (M, α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionProfile {
    pub p_c: f64,
    /// `None` when no single p-value can force rejection.
    pub p_r: Option<f64>,
    pub alpha: f64,
    pub m: usize,
    /// (p_c − p_r)/p_c; `None` when p_r is absent or p_c = 0.
    pub quotient: Option<f64>,
}

impl RejectionProfile {
    pub fn new(p_c: f64, p_r: Option<f64>, alpha: f64, m: usize) -> Self {
        let quotient = match p_r {
            Some(p_r) if p_c > 0.0 => Some(((p_c - p_r) / p_c).clamp(0.0, 1.0)),
            _ => None,
        };
        RejectionProfile {
            p_c,
            p_r,
            alpha,
            m,
            quotient,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("α must lie in (0, 1), got {alpha}")))
    }
}

fn check_m(m: usize) -> Result<()> {
    if m >= 1 {
        Ok(())
    } else {
        Err(Error::domain("M must be ≥ 1"))
    }
}

/// Largest x in [0, hi] with `rejects(x)`, assuming `rejects(0)` holds and
/// the rejection set is an interval starting at 0.
fn bisect_sup<F: Fn(f64) -> bool>(rejects: F, hi: f64, tol: f64) -> f64 {
    if rejects(hi) {
        return hi;
    }
    let (mut lo, mut hi) = (0.0, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rejects(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// sup{p : g(p, …, p) ≤ α} by bisection on [0, 1].
pub fn central_level_generic<G>(pool: G, m: usize, alpha: f64, tol: f64) -> Result<f64>
where
    G: Fn(&[f64]) -> f64,
{
    check_alpha(alpha)?;
    check_m(m)?;
    let buf = std::cell::RefCell::new(vec![0.0; m]);
    let rejects = |x: f64| {
        let mut v = buf.borrow_mut();
        v.iter_mut().for_each(|v| *v = x);
        pool(&v) <= alpha
    };
    if !rejects(0.0) {
        return Err(Error::NoRejectionRegion { alpha });
    }
    Ok(bisect_sup(rejects, 1.0, tol))
}

/// sup{p₁ ∈ [0, b] : g(p₁, b, …, b) ≤ α}, or `None` when even p₁ = 0 does
/// not reject.
pub fn marginal_level_generic<G>(pool: G, m: usize, alpha: f64, b: f64, tol: f64) -> Result<Option<f64>>
where
    G: Fn(&[f64]) -> f64,
{
    check_alpha(alpha)?;
    check_m(m)?;
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::domain(format!("b must lie in (0, 1], got {b}")));
    }
    let buf = std::cell::RefCell::new(vec![b; m]);
    let rejects = |x: f64| {
        let mut v = buf.borrow_mut();
        v[0] = x;
        pool(&v) <= alpha
    };
    if !rejects(0.0) {
        return Ok(None);
    }
    Ok(Some(bisect_sup(rejects, b, tol)))
}

/// Closed-form central level 1 − F(F_M⁻¹(1 − α)/Σc_i) of a quantile pooler,
/// given the transform's survival function `sf` and the upper quantile
/// `sum_isf` of the null of the weighted sum.
pub fn quantile_closed_pc<S, Q>(sf: S, sum_isf: Q, weight_sum: f64, alpha: f64) -> f64
where
    S: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    sf(sum_isf(alpha) / weight_sum)
}

/// Closed-form marginal level at b = 1 of an unweighted quantile pooler:
/// 1 − F(F_M⁻¹(1 − α) − (M − 1)·F⁻¹(0)), where `lower_support` = F⁻¹(0).
/// An infinite lower support gives 0.
pub fn quantile_closed_pr<S, Q>(sf: S, sum_isf: Q, lower_support: f64, m: usize, alpha: f64) -> f64
where
    S: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    if lower_support == f64::NEG_INFINITY {
        return 0.0;
    }
    sf(sum_isf(alpha) - (m as f64 - 1.0) * lower_support)
}

fn check_chi(kappa: f64, m: usize, alpha: f64) -> Result<()> {
    check_alpha(alpha)?;
    check_m(m)?;
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("κ must be finite and > 0, got {kappa}")))
    }
}

/// ln(χ*_{Mκ}(α)/2), kept as a logarithm because the critical value
/// underflows for tiny Mκ.
fn ln_half_critical(kappa: f64, m: usize, alpha: f64) -> f64 {
    inv_gamma_pq_ln(0.5 * kappa * m as f64, 1.0 - alpha, alpha)
}

/// Central level of the χ²_κ pooler: P(χ²_κ ≥ χ*_{Mκ}(α)/M).
pub fn chi_pc(kappa: f64, m: usize, alpha: f64) -> Result<f64> {
    check_chi(kappa, m, alpha)?;
    let t = ln_half_critical(kappa, m, alpha) - (m as f64).ln();
    Ok(ln_gamma_pq_t(0.5 * kappa, t).1.exp())
}

/// Marginal level of the χ²_κ pooler: P(χ²_κ ≥ χ*_{Mκ}(α)).
pub fn chi_pr(kappa: f64, m: usize, alpha: f64) -> Result<f64> {
    check_chi(kappa, m, alpha)?;
    let t = ln_half_critical(kappa, m, alpha);
    Ok(ln_gamma_pq_t(0.5 * kappa, t).1.exp())
}

/// Centrality quotient of the χ²_κ pooler.
pub fn chi_q(kappa: f64, m: usize, alpha: f64) -> Result<f64> {
    let pc = chi_pc(kappa, m, alpha)?;
    let pr = chi_pr(kappa, m, alpha)?;
    if pc == 0.0 {
        return Err(Error::numerical(format!(
            "central level underflows for κ = {kappa}, M = {m}"
        )));
    }
    Ok((pc - pr) / pc)
}

/// Outcome of a κ lookup by centrality quotient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaAdvice {
    Kappa(f64),
    /// Quotient 0: use Tippett's pooler.
    UseTippett,
    /// Quotient 1: use Stouffer's pooler.
    UseStouffer,
}

/// Lower and upper ends of the ln κ search interval.
pub const LN_KAPPA_RANGE: (f64, f64) = (-20.0, 20.0);

/// κ whose χ²_κ pooler has centrality quotient `target_q`, by bisection on
/// ln κ (the quotient increases with κ).
pub fn chi_kappa(target_q: f64, m: usize, alpha: f64) -> Result<KappaAdvice> {
    check_alpha(alpha)?;
    check_m(m)?;
    if !(0.0..=1.0).contains(&target_q) {
        return Err(Error::domain(format!("target quotient must lie in [0, 1], got {target_q}")));
    }
    if target_q == 0.0 {
        return Ok(KappaAdvice::UseTippett);
    }
    if target_q == 1.0 {
        return Ok(KappaAdvice::UseStouffer);
    }
    let f = |t: f64| chi_q(t.exp(), m, alpha).map(|q| q - target_q);
    let (mut lo, mut hi) = LN_KAPPA_RANGE;
    if f(lo)? > 0.0 || f(hi)? < 0.0 {
        return Err(Error::numerical(format!(
            "quotient {target_q} is not attained for ln κ in [{lo}, {hi}] at M = {m}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if v.abs() <= 1e-10 || hi - lo < 1e-13 {
            return Ok(KappaAdvice::Kappa(mid.exp()));
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(KappaAdvice::Kappa((0.5 * (lo + hi)).exp()))
}

/// Closed-form rejection profile (b = 1) where one exists: Tippett, Stouffer,
/// Fisher, unweighted gamma and χ²_κ. Returns `None` for other methods.
pub fn closed_form_profile(method: &MethodSpec, m: usize, alpha: f64) -> Result<Option<RejectionProfile>> {
    check_alpha(alpha)?;
    check_m(m)?;
    let mf = m as f64;
    let uniform_weights = method
        .weights
        .as_ref()
        .is_none_or(|w| w.windows(2).all(|p| p[0] == p[1]));
    let profile = match method.kind {
        MethodKind::Order { k: 1 } => {
            let pc = -((1.0 - alpha).ln() / mf).exp_m1();
            Some(RejectionProfile::new(pc, Some(pc), alpha, m))
        }
        MethodKind::Stouffer => {
            let scale = match &method.weights {
                Some(w) => w.iter().sum::<f64>() / w.iter().map(|c| c * c).sum::<f64>().sqrt(),
                None => mf.sqrt(),
            };
            let pc = normal_sf(normal_upper_quantile(alpha) / scale);
            Some(RejectionProfile::new(pc, Some(0.0), alpha, m))
        }
        MethodKind::Fisher if uniform_weights => {
            let pc = chi2_sf_raw(chi2_isf_raw(alpha, 2.0 * mf) / mf, 2.0);
            let pr = chi2_sf_raw(chi2_isf_raw(alpha, 2.0 * mf), 2.0);
            Some(RejectionProfile::new(pc, Some(pr), alpha, m))
        }
        MethodKind::Chi { kappa } if uniform_weights && kappa > 0.0 => Some(RejectionProfile::new(
            chi_pc(kappa, m, alpha)?,
            Some(chi_pr(kappa, m, alpha)?),
            alpha,
            m,
        )),
        MethodKind::Gamma { k, .. } if uniform_weights => {
            // scale-free: the gamma pooler depends on θ only through units
            let pc = chi2_sf_raw(chi2_isf_raw(alpha, 2.0 * k * mf) / mf, 2.0 * k);
            let pr = chi2_sf_raw(chi2_isf_raw(alpha, 2.0 * k * mf), 2.0 * k);
            Some(RejectionProfile::new(pc, Some(pr), alpha, m))
        }
        _ => None,
    };
    Ok(profile)
}

/// Rejection profile by root finding on the pooled p-value itself; works for
/// every method (hr needs its null table).
pub fn generic_profile(
    method: &MethodSpec,
    m: usize,
    alpha: f64,
    table: Option<&NullQuantileTable>,
    tol: f64,
) -> Result<RejectionProfile> {
    // fail early on a missing or mismatched table
    method.pool(&vec![0.5; m], table)?;
    let pool = |p: &[f64]| method.pool(p, table).unwrap_or(f64::NAN);
    let pc = central_level_generic(pool, m, alpha, tol)?;
    let pr = marginal_level_generic(pool, m, alpha, 1.0, tol)?;
    Ok(RejectionProfile::new(pc, pr, alpha, m))
}
