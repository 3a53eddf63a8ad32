//! Special functions and distribution primitives.

mod beta;
mod dist;
mod gamma;
pub(crate) mod incgamma;
pub(crate) mod normal;
mod types;

pub use beta::{beta_sample, ln_beta_variate, ln_gamma_variate};
pub use dist::{
    chi2_cdf, chi2_isf, chi2_quantile, chi2_sf, gamma_cdf, gamma_isf, gamma_quantile, gamma_sf,
};
pub(crate) use dist::{chi2_isf_raw, chi2_sf_raw};
pub use gamma::log_gamma;
pub(crate) use gamma::{ln_beta, ln_gamma};
pub use incgamma::{reg_gamma_lower, reg_gamma_upper};
pub use normal::{normal_cdf, normal_quantile, normal_sf, normal_upper_quantile};
pub use types::{Probability, RealPositive};
