//! Pooled p-values: order statistics, the quantile-transformation family and
//! the HR statistic with its simulated null.

mod hr;
mod method;
mod order;
mod pvalues;
mod quantile;

pub use hr::{hr_label, hr_pool, hr_stat, simulate_hr_table, simulate_table, NullQuantileTable};
pub use method::{MethodKind, MethodSpec};
pub use order::{ord_pool, tippett};
pub use pvalues::PValues;
pub use quantile::{
    chi_pool, fisher_pool, gamma_pool, pearson_pool, quantile_pool, stouffer_pool,
    stouffer_pool_weighted,
};

pub(crate) use quantile::chi_pool_raw;
