//! Kullback–Leibler divergence of the uniform density from beta alternatives.
//!
//! The monotone beta family is parameterized by the shape `a ∈ (0, 1]` and the
//! weight `w = (1 − a)/(b − a) ∈ (0, 1]`, so that `b = a + (1 − a)/w`. The
//! divergence D(u, f) = ∫ ln(1/f) over the unit interval has the closed form
//! `a + b − 2 + ln B(a, b)`.

use crate::error::{Error, Result};
use crate::specfun::{ln_beta, ln_gamma};

/// Smallest shape `a` searched by [`find_a`].
pub const A_FLOOR: f64 = 1e-300;

/// A beta alternative together with its divergence from uniform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaAlt {
    pub a: f64,
    pub b: f64,
    /// `(1 − a)/(b − a)` when the density is non-increasing (`a ≤ 1 ≤ b`).
    pub w: Option<f64>,
    pub divergence: f64,
}

impl BetaAlt {
    /// The uniform density, Beta(1, 1).
    pub fn uniform() -> Self {
        BetaAlt {
            a: 1.0,
            b: 1.0,
            w: Some(1.0),
            divergence: 0.0,
        }
    }

    /// Non-increasing alternative from `a ∈ (0, 1]` and `w ∈ (0, 1]`.
    pub fn from_a_w(a: f64, w: f64) -> Result<Self> {
        let divergence = beta_divergence_w(a, w)?;
        Ok(BetaAlt {
            a,
            b: b_from_a_w(a, w),
            w: Some(w),
            divergence,
        })
    }

    /// Any Beta(a, b); `w` is set only inside the non-increasing family.
    pub fn from_shapes(a: f64, b: f64) -> Result<Self> {
        let divergence = beta_divergence(a, b)?;
        let w = if a == 1.0 && b == 1.0 {
            Some(1.0)
        } else if a <= 1.0 && b >= 1.0 {
            Some((1.0 - a) / (b - a))
        } else {
            None
        };
        Ok(BetaAlt { a, b, w, divergence })
    }

    /// Non-increasing alternative with the given divergence and weight.
    pub fn from_divergence(target: f64, w: f64) -> Result<Self> {
        let a = find_a(target, w)?;
        BetaAlt::from_a_w(a, w)
    }

    /// ln of the density at `x`.
    pub fn ln_density(&self, x: f64) -> f64 {
        beta_ln_density(self.a, self.b, x)
    }
}

fn b_from_a_w(a: f64, w: f64) -> f64 {
    a + (1.0 - a) / w
}

/// ln of the Beta(a, b) density at x ∈ (0, 1).
pub fn beta_ln_density(a: f64, b: f64, x: f64) -> f64 {
    let mut v = -ln_beta(a, b);
    if a != 1.0 {
        v += (a - 1.0) * x.ln();
    }
    if b != 1.0 {
        v += (b - 1.0) * (-x).ln_1p();
    }
    v
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// D(u, Beta(a, b)) = a + b − 2 + ln Γ(a) + ln Γ(b) − ln Γ(a + b).
pub fn beta_divergence(a: f64, b: f64) -> Result<f64> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    if a == 1.0 && b == 1.0 {
        return Ok(0.0);
    }
    Ok(a + b - 2.0 + ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
}

/// Divergence of the non-increasing alternative with shape `a` and weight `w`.
pub fn beta_divergence_w(a: f64, w: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain(format!("a must lie in (0, 1], got {a}")));
    }
    if !(w > 0.0 && w <= 1.0) {
        return Err(Error::domain(format!(
            "w must lie in (0, 1], got {w} (w = 0 is degenerate)"
        )));
    }
    if a == 1.0 {
        return Ok(0.0);
    }
    beta_divergence(a, b_from_a_w(a, w))
}

/// Shape `a` such that `beta_divergence_w(a, w)` equals `target`.
///
/// The divergence decreases in `a`, so the root is found by bisection on
/// ln a over `[ln A_FLOOR, 0]`.
pub fn find_a(target: f64, w: f64) -> Result<f64> {
    if !target.is_finite() || target < 0.0 {
        return Err(Error::domain(format!("target divergence must be ≥ 0, got {target}")));
    }
    let d_floor = beta_divergence_w(A_FLOOR, w)?;
    if target == 0.0 {
        return Ok(1.0);
    }
    if target > d_floor {
        return Err(Error::UnreachableDivergence {
            target,
            w,
            max_attainable: d_floor,
        });
    }
    let f = |t: f64| beta_divergence_w(t.exp().min(1.0), w).map(|d| d - target);
    let mut lo = A_FLOOR.ln();
    let mut hi = 0.0f64;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v.abs() <= 1e-13 * target.max(1.0) {
            return Ok(mid.exp());
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // bracket exhausted at double resolution; pick the closer end
    let (vlo, vhi) = (f(lo)?.abs(), f(hi)?.abs());
    Ok(if vlo < vhi { lo.exp() } else { hi.exp() }.min(1.0))
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Number of geometric panels on each half of the unit interval.
const PANELS: usize = 40;

/// KL divergence ∫ p ln(p/q) over (0, 1) from log densities.
///
/// Each half of the interval is cut into panels [h/2, h] shrinking
/// geometrically towards its endpoint, plus an innermost panel [0, 2⁻⁴¹].
/// Gauss–Legendre rules never evaluate at the endpoints, so integrable
/// singularities there are harmless. `n_points` is the total number of
/// density evaluations (at least 1000).
pub fn kl_divergence_numeric<P, Q>(log_p: P, log_q: Q, n_points: usize) -> Result<f64>
where
    P: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    if n_points < 1000 {
        return Err(Error::domain(format!("n_points must be ≥ 1000, got {n_points}")));
    }
    let order = n_points.div_ceil(2 * (PANELS + 1));
    let (nodes, weights) = gauss_legendre(order);

    // panels as (distance from endpoint lo, hi)
    let mut panels = Vec::with_capacity(PANELS + 1);
    let mut h = 0.5;
    for _ in 0..PANELS {
        panels.push((0.5 * h, h));
        h *= 0.5;
    }
    panels.push((0.0, h));

    let mut total = 0.0;
    for left in [true, false] {
        for &(lo, hi) in &panels {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (t, wt) in nodes.iter().zip(&weights) {
                let d = mid + half * t;
                let x = if left { d } else { 1.0 - d };
                let lp = log_p(x);
                if lp == f64::NEG_INFINITY {
                    continue;
                }
                let v = lp.exp() * (lp - log_q(x));
                if !v.is_finite() {
                    return Err(Error::numerical(format!(
                        "non-finite KL integrand at x = {x}"
                    )));
                }
                total += half * wt * v;
            }
        }
    }
    Ok(total)
}
