//! Pooling independent p-values into one family-wise p-value, measuring the
//! balance of each pooler between central and marginal rejection, and the
//! Monte Carlo machinery to compare poolers under beta alternatives.

pub mod centrality;
pub mod divergence;
pub mod error;
pub mod fmt;
mod par;
pub mod pooling;
pub mod rng;
pub mod sampling;
pub mod simulation;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
