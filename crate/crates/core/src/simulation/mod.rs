//! Monte Carlo power engine, κ sweeps, the alternative atlas and test
//! selection.

mod atlas;
mod mask;
mod power;
mod select;
mod smooth;
mod sweep;

pub use atlas::{atlas, Atlas, AtlasConfig};
pub use mask::{alt_frequency_map, corner_mask, max_power_mask, two_proportion_z, FrequencyMap};
pub use power::{power_estimate, power_estimates, power_surface, PowerEstimate, PowerGrid, SurfaceConfig};
pub use select::select_tests;
pub use smooth::{gaussian_smooth, Grid2};
pub use sweep::{
    default_ln_kappa_grid, kappa_curve, kappa_sweep, ln_kappa_grid, median, median_curve,
    min_over_kappa, simulate_sweep_null, sweep_label, KappaSweep, NullRefs,
};
