//! Standard normal distribution.
//!
//! Φ is evaluated through the incomplete gamma function, Φ(−|z|) = Q(½, z²/2)/2,
//! so both tails inherit its relative accuracy. The quantile starts from
//! Acklam's rational approximation and is polished by Newton steps on ln Φ.

use super::incgamma::ln_gamma_pq;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// ln Φ(z) for z ≤ 0.
fn ln_cdf_lower(z: f64) -> f64 {
    debug_assert!(z <= 0.0);
    if z == 0.0 {
        return -std::f64::consts::LN_2;
    }
    if z == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let (_, lq) = ln_gamma_pq(0.5, 0.5 * z * z);
    lq - std::f64::consts::LN_2
}

/// Standard normal CDF Φ(z).
pub fn normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z <= 0.0 {
        ln_cdf_lower(z).exp()
    } else {
        // 1 − Φ(−z) = ½(1 + P(½, z²/2))
        if z == f64::INFINITY {
            return 1.0;
        }
        let (lp, _) = ln_gamma_pq(0.5, 0.5 * z * z);
        0.5 + 0.5 * lp.exp()
    }
}

/// Upper tail 1 − Φ(z), accurate for large z.
pub fn normal_sf(z: f64) -> f64 {
    normal_cdf(-z)
}

/// Acklam's approximation to Φ⁻¹ (relative error ≈ 1.15e-9).
pub(crate) fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        let r = (-2.0 * q.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    };
    if p < P_LOW {
        tail(p)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail(1.0 - p)
    }
}

/// Φ⁻¹(p) for p ∈ (0, ½], refined to full precision.
fn quantile_lower_half(p: f64) -> f64 {
    let mut x = acklam(p).min(0.0);
    let ln_p = p.ln();
    for _ in 0..4 {
        let ln_cdf = ln_cdf_lower(x);
        let ln_pdf = -0.5 * x * x - LN_SQRT_2PI;
        let step = (ln_cdf - ln_p) / (ln_pdf - ln_cdf).exp();
        if !step.is_finite() {
            break;
        }
        x = (x - step).min(0.0);
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Lower-tail standard normal quantile without sentinel checks, p ∈ (0, 1).
pub(crate) fn ndtri(p: f64) -> f64 {
    if p <= 0.5 {
        quantile_lower_half(p)
    } else {
        -quantile_lower_half(1.0 - p)
    }
}

/// Standard normal quantile Φ⁻¹(q); q = 0 and q = 1 map to ∓∞, anything
/// outside [0, 1] to NaN.
pub fn normal_quantile(q: f64) -> f64 {
    if q.is_nan() || !(0.0..=1.0).contains(&q) {
        return f64::NAN;
    }
    if q == 0.0 {
        return f64::NEG_INFINITY;
    }
    if q == 1.0 {
        return f64::INFINITY;
    }
    if q == 0.5 {
        return 0.0;
    }
    ndtri(q)
}

/// Upper-tail quantile Φ⁻¹(1 − p), exact in the tail for tiny p.
pub fn normal_upper_quantile(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    -normal_quantile(p)
}
