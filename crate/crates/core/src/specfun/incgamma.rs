//! Regularized incomplete gamma functions P(s, x) and Q(s, x), evaluated in
//! log space so that both tails keep full relative precision, and their
//! inverse.

use crate::error::{Error, Result};

use super::gamma::{ln_gamma, ln_gamma_1p, stirling_error};

const EPS: f64 = f64::EPSILON;
const MAX_ITER: usize = 10_000_000;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
/// ln of the smallest positive normal double.
const LN_MIN_POSITIVE: f64 = -708.396_418_532_264_1;

/// ln(1 − e^a) for a ≤ 0.
pub(crate) fn ln_1m_exp(a: f64) -> f64 {
    if a > -std::f64::consts::LN_2 {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

/// ln( x^s e^{-x} / Γ(s+1) ), computed without the cancellation of
/// s·ln x − x against ln Γ(s+1) when s is large.
fn ln_prefactor(s: f64, x: f64) -> f64 {
    if s < 10.0 {
        return s * x.ln() - x - ln_gamma_1p(s);
    }
    // s ln(x/s) + s − x = −s·(t − 1 − ln t) with t = x/s
    let u = (x - s) / s;
    let dev = if u.abs() < 0.5 { u - u.ln_1p() } else { u - (x / s).ln() };
    -s * dev - HALF_LN_2PI - 0.5 * s.ln() - stirling_error(s)
}

/// (ln P(s,x), ln Q(s,x)) for s > 0, x ≥ 0.
///
/// Series for x < s+1 and a Lentz continued fraction otherwise. Shapes below
/// one use the expansion Q = 1 − x^s/Γ(s+1) − x^s/Γ(s+1)·s·Σ(−x)^n/(n!(s+n)),
/// with the leading difference taken through `expm1` so that Q keeps its
/// relative accuracy when s is tiny.
pub(crate) fn ln_gamma_pq(s: f64, x: f64) -> (f64, f64) {
    debug_assert!(s > 0.0 && x >= 0.0);
    if x == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    if x == f64::INFINITY {
        return (0.0, f64::NEG_INFINITY);
    }
    if x < s + 1.0 {
        if s < 1.0 {
            small_shape(s, x)
        } else {
            let ln_p = ln_prefactor(s, x) + lower_series(s, x).ln();
            (ln_p, ln_1m_exp(ln_p))
        }
    } else {
        let ln_q = ln_prefactor(s, x) + s.ln() + upper_fraction(s, x).ln();
        (ln_1m_exp(ln_q.min(0.0)), ln_q.min(0.0))
    }
}

/// Σ_{n≥0} x^n / ((s+1)…(s+n))
fn lower_series(s: f64, x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut n = 1.0;
    for _ in 0..MAX_ITER {
        term *= x / (s + n);
        sum += term;
        if term < sum * EPS {
            break;
        }
        n += 1.0;
    }
    sum
}

/// Continued fraction for Γ(s,x) e^x x^{-s}, modified Lentz.
fn upper_fraction(s: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

fn small_shape(s: f64, x: f64) -> (f64, f64) {
    let ln_u = s * x.ln() - ln_gamma_1p(s);
    // T = Σ_{n≥1} (−x)^n / (n! (s+n))
    let mut t = 0.0;
    let mut term = 1.0;
    for n in 1..MAX_ITER {
        let nf = n as f64;
        term *= -x / nf;
        let add = term / (s + nf);
        t += add;
        if add.abs() < EPS * t.abs().max(EPS) {
            break;
        }
    }
    let u = ln_u.exp();
    let q = -ln_u.exp_m1() - u * s * t;
    let ln_p = ln_u + (s * t).ln_1p();
    if q > 0.0 {
        (ln_p, q.ln())
    } else {
        (ln_p, ln_1m_exp(ln_p.min(0.0)))
    }
}

/// (ln P, ln Q) at x = e^t. Below the smallest normal double x is
/// negligible against every additive term, leaving P = x^s/Γ(s+1).
pub(crate) fn ln_gamma_pq_t(s: f64, t: f64) -> (f64, f64) {
    if t > LN_MIN_POSITIVE {
        return ln_gamma_pq(s, t.exp());
    }
    if t == f64::NEG_INFINITY {
        return (f64::NEG_INFINITY, 0.0);
    }
    let ln_p = s * t - ln_gamma_1p(s);
    (ln_p, ln_1m_exp(ln_p.min(0.0)))
}

/// (P, Q) for s > 0, x ≥ 0.
pub(crate) fn gamma_pq(s: f64, x: f64) -> (f64, f64) {
    let (lp, lq) = ln_gamma_pq(s, x);
    (lp.exp(), lq.exp())
}

/// ln of x times the gamma(s, 1) density at x = e^t.
fn ln_x_density_t(s: f64, t: f64) -> f64 {
    if t > LN_MIN_POSITIVE {
        ln_prefactor(s, t.exp()) + s.ln()
    } else {
        s * t - ln_gamma_1p(s) + s.ln()
    }
}

/// Inverse of the regularized incomplete gamma function for shape `s`.
pub(crate) fn inv_gamma_pq(s: f64, lower: f64, upper: f64) -> f64 {
    inv_gamma_pq_ln(s, lower, upper).exp()
}

/// ln of the inverse of the regularized incomplete gamma function.
///
/// `lower` and `upper` are the complementary targets P and Q (the caller
/// supplies both so that neither tail is rounded through `1 − p`). The root
/// is bracketed in t = ln x between the bound x^s/Γ(s+1) ≥ P and the Markov
/// bound Q ≤ s/x, then located by Halley steps on the log of whichever tail
/// is smaller, falling back to bisection whenever a step leaves the bracket.
/// Working in t keeps quantiles far below the smallest double (tiny shapes)
/// usable. Returns −∞ for P = 0 and +∞ for Q = 0.
pub(crate) fn inv_gamma_pq_ln(s: f64, lower: f64, upper: f64) -> f64 {
    debug_assert!(s > 0.0);
    if lower <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if upper <= 0.0 {
        return f64::INFINITY;
    }
    if s == 1.0 {
        // exponential distribution
        let x = if upper < 0.5 { -upper.ln() } else { -(-lower).ln_1p() };
        return x.ln();
    }
    let use_lower = lower <= upper;
    let ln_target = if use_lower { lower.ln() } else { upper.ln() };
    // g(t) increasing in t with root at the answer; returns (g, g', g'')
    // using d ln(x f(x))/dt = s − x
    let g = |t: f64| -> (f64, f64, f64) {
        let (lp, lq) = ln_gamma_pq_t(s, t);
        let lxd = ln_x_density_t(s, t);
        let x = if t > LN_MIN_POSITIVE { t.exp() } else { 0.0 };
        if use_lower {
            let d1 = (lxd - lp).exp();
            (lp - ln_target, d1, d1 * (s - x - d1))
        } else {
            let d1 = (lxd - lq).exp();
            (ln_target - lq, d1, d1 * (s - x + d1))
        }
    };

    let mut lo = (lower.ln() + ln_gamma_1p(s)) / s;
    let mut hi = (s.ln() - upper.ln()).min(f64::MAX.ln());
    if lo >= hi {
        lo = hi - 1.0;
    }
    while g(lo).0 >= 0.0 {
        // bound was not a bracket (rounding); widen
        lo -= 1.0 + lo.abs();
    }

    let mut t = initial_guess(s, lower, upper).clamp(lo, hi);
    if !(t > lo && t < hi) {
        t = 0.5 * (lo + hi);
    }
    for _ in 0..400 {
        let (gt, d1, d2) = g(t);
        if gt == 0.0 {
            break;
        }
        if gt > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        // Halley near the root, Newton further out, bisection off the bracket
        let newton = gt / d1;
        let h = 0.5 * newton * d2 / d1;
        let delta = if h.abs() < 0.5 { newton / (1.0 - h) } else { newton };
        let scale = t.abs().max(1.0);
        // converged once the step moves ln P (or ln Q) by under 1e-9; the
        // error left after such a step is of order step². A step past the
        // bracket means the root sits at that end.
        if (delta * d1).abs() <= 1e-9 || delta.abs() <= 4.0 * EPS * scale {
            t = (t - delta).clamp(lo, hi);
            break;
        }
        let mut next = t - delta;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        t = next;
        if hi - lo <= 4.0 * EPS * scale {
            break;
        }
    }
    t
}

fn initial_guess(s: f64, lower: f64, upper: f64) -> f64 {
    if s >= 0.5 {
        // Wilson–Hilferty on the chi-square scale, df = 2s
        let z = if upper < 0.5 {
            -super::normal::ndtri(upper)
        } else {
            super::normal::ndtri(lower)
        };
        let v = 1.0 / (9.0 * s);
        let c = 1.0 - v + z * v.sqrt();
        if c > 0.0 {
            return (s * c * c * c).ln();
        }
    }
    // P ≈ x^s / Γ(1+s) while x is small
    let t_small = (lower.ln() + ln_gamma_1p(s)) / s;
    if lower < 0.5 || t_small < -1.0 {
        t_small
    } else {
        // Q ≈ x^{s-1} e^{-x} / Γ(s) for large x
        let y = -upper.ln() - ln_gamma(s);
        y.max(1.0).ln()
    }
}

/// Regularized lower incomplete gamma function P(s, x) = γ(s,x)/Γ(s).
pub fn reg_gamma_lower(s: f64, x: f64) -> Result<f64> {
    check_shape(s)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(format!("incomplete gamma requires x ≥ 0, got {x}")));
    }
    Ok(gamma_pq(s, x).0)
}

/// Regularized upper incomplete gamma function Q(s, x) = 1 − P(s, x).
pub fn reg_gamma_upper(s: f64, x: f64) -> Result<f64> {
    check_shape(s)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(format!("incomplete gamma requires x ≥ 0, got {x}")));
    }
    Ok(gamma_pq(s, x).1)
}

pub(crate) fn check_shape(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("shape must be finite and > 0, got {s}")))
    }
}
