//! p-value generators under the global null and beta alternatives.
//!
//! Under H3 a fraction η of the M p-values follows one beta density and the
//! rest are uniform; H4 is the case η = 1.

use rand::distr::Open01;
use rand::Rng;

use crate::divergence::BetaAlt;
use crate::error::{Error, Result};
use crate::pooling::PValues;
use crate::specfun::beta_sample;

/// Prevalence, strength and size of an H3/H4 alternative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternativeSpec {
    pub eta: f64,
    pub alt: BetaAlt,
    pub m: usize,
}

impl AlternativeSpec {
    pub fn new(eta: f64, alt: BetaAlt, m: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::domain(format!("η must lie in [0, 1], got {eta}")));
        }
        if m == 0 {
            return Err(Error::domain("M must be ≥ 1"));
        }
        Ok(AlternativeSpec { eta, alt, m })
    }

    /// Number of non-null p-values, round(M·η) with halves rounded up.
    pub fn n_alt(&self) -> usize {
        round_half_up(self.m as f64 * self.eta).min(self.m)
    }

    /// Overwrites `out` (length M) with one draw: the first `n_alt` entries
    /// from the beta alternative, the rest uniform.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.m);
        let k = self.n_alt();
        let uniform = self.alt.a == 1.0 && self.alt.b == 1.0;
        for (i, v) in out.iter_mut().enumerate() {
            *v = if i < k && !uniform {
                beta_sample(self.alt.a, self.alt.b, rng)
            } else {
                rng.sample(Open01)
            };
        }
    }
}

/// Rounds x ≥ 0 to the nearest integer, halves up. A relative slack of a few
/// ulps absorbs products such as 10 × 0.35 that land just below a half.
pub(crate) fn round_half_up(x: f64) -> usize {
    (x + 0.5 + 8.0 * f64::EPSILON * x.max(1.0)).floor() as usize
}

/// M iid uniform p-values.
pub fn gen_h0<R: Rng + ?Sized>(m: usize, rng: &mut R) -> PValues {
    PValues::trusted((0..m).map(|_| rng.sample(Open01)).collect())
}

/// M iid draws from the alternative.
pub fn gen_h4<R: Rng + ?Sized>(alt: &BetaAlt, m: usize, rng: &mut R) -> PValues {
    let spec = AlternativeSpec { eta: 1.0, alt: *alt, m };
    gen_h3(&spec, rng)
}

/// round(M·η) draws from the alternative followed by uniform draws.
pub fn gen_h3<R: Rng + ?Sized>(spec: &AlternativeSpec, rng: &mut R) -> PValues {
    let mut out = vec![0.0; spec.m];
    spec.fill(rng, &mut out);
    PValues::trusted(out)
}

/// Alternative with the given prevalence, divergence and weight w.
pub fn spec_from_divergence(eta: f64, divergence: f64, w: f64, m: usize) -> Result<AlternativeSpec> {
    AlternativeSpec::new(eta, BetaAlt::from_divergence(divergence, w)?, m)
}
