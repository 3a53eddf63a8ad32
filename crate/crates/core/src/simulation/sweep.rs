//! Sweeping the χ²_κ pooler over a log-κ grid and the minimum over κ.

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::pooling::{chi_pool_raw, simulate_table, NullQuantileTable};

/// `n` evenly spaced ln κ values from `lo` to `hi` inclusive.
pub fn ln_kappa_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

/// 65 ln κ values from −8 to 8 (step 0.25).
pub fn default_ln_kappa_grid() -> Vec<f64> {
    ln_kappa_grid(-8.0, 8.0, 65)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("ln κ grid is empty"));
    }
    if grid.iter().any(|v| !v.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("ln κ grid must be finite and strictly increasing"));
    }
    Ok(())
}

/// Pooled χ²_κ p-value at every grid point.
pub fn kappa_curve(p: &[f64], ln_kappa: &[f64]) -> Vec<f64> {
    ln_kappa.iter().map(|&t| chi_pool_raw(p, t.exp())).collect()
}

/// min over the grid of the pooled χ²_κ p-value.
pub fn min_over_kappa(p: &[f64], ln_kappa: &[f64]) -> f64 {
    ln_kappa
        .iter()
        .map(|&t| chi_pool_raw(p, t.exp()))
        .fold(f64::INFINITY, f64::min)
}

/// Label of the null table of the min-over-κ statistic for a grid.
pub fn sweep_label(ln_kappa: &[f64]) -> String {
    format!(
        "chimin(lo={},hi={},n={})",
        ln_kappa.first().copied().unwrap_or(f64::NAN),
        ln_kappa.last().copied().unwrap_or(f64::NAN),
        ln_kappa.len()
    )
}

/// Simulated null distribution of the min-over-κ statistic. The grid is
/// identified by its endpoints and length, so build it with
/// [`ln_kappa_grid`].
pub fn simulate_sweep_null(ln_kappa: &[f64], m: usize, n_sim: usize, seed: u64) -> Result<NullQuantileTable> {
    check_grid(ln_kappa)?;
    let grid = ln_kappa.to_vec();
    simulate_table(sweep_label(ln_kappa), m, n_sim, seed, move |p| min_over_kappa(p, &grid))
}

/// Null reference quantiles of the min-over-κ statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullRefs {
    pub q05: f64,
    pub q01: f64,
    pub q001: f64,
    pub n_sim: usize,
}

impl NullRefs {
    pub fn from_table(table: &NullQuantileTable) -> Self {
        NullRefs {
            q05: table.quantile(0.05),
            q01: table.quantile(0.01),
            q001: table.quantile(0.001),
            n_sim: table.n_sim,
        }
    }
}

/// Pooled p-values across κ and the minimizing κ.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaSweep {
    pub ln_kappa: Vec<f64>,
    pub pooled: Vec<f64>,
    pub index_min: usize,
    pub kappa_min: f64,
    pub p_min: f64,
    pub null_refs: Option<NullRefs>,
}

impl KappaSweep {
    /// CSV with columns ln_kappa, pooled_p.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("ln_kappa,pooled_p\n");
        for (t, p) in self.ln_kappa.iter().zip(&self.pooled) {
            out.push_str(&format!("{},{}\n", g17(*t), g17(*p)));
        }
        out
    }

    /// key=value summary lines.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "kappa_min={}\nln_kappa_min={}\np_min={}\n",
            g17(self.kappa_min),
            g17(self.ln_kappa[self.index_min]),
            g17(self.p_min)
        );
        if let Some(r) = &self.null_refs {
            out.push_str(&format!(
                "null_ref_q05={}\nnull_ref_q01={}\nnull_ref_q001={}\nnull_ref_n_sim={}\n",
                g17(r.q05),
                g17(r.q01),
                g17(r.q001),
                r.n_sim
            ));
        }
        out
    }
}

/// Sweeps `p` over the grid. Ties for the minimum go to the smallest κ.
/// `null` must be a [`simulate_sweep_null`] table for this grid and M.
pub fn kappa_sweep(p: &[f64], ln_kappa: &[f64], null: Option<&NullQuantileTable>) -> Result<KappaSweep> {
    check_grid(ln_kappa)?;
    if p.is_empty() {
        return Err(Error::domain("at least one p-value is required"));
    }
    if let Some(t) = null {
        let label = sweep_label(ln_kappa);
        if t.method != label || t.m != p.len() {
            return Err(Error::domain(format!(
                "null table is for {} with M = {}, needed {label} with M = {}",
                t.method,
                t.m,
                p.len()
            )));
        }
    }
    let pooled = kappa_curve(p, ln_kappa);
    let mut index_min = 0;
    for (i, &v) in pooled.iter().enumerate() {
        if v < pooled[index_min] {
            index_min = i;
        }
    }
    Ok(KappaSweep {
        ln_kappa: ln_kappa.to_vec(),
        kappa_min: ln_kappa[index_min].exp(),
        p_min: pooled[index_min],
        pooled,
        index_min,
        null_refs: null.map(NullRefs::from_table),
    })
}

/// Pointwise median of equally long curves.
pub fn median_curve(curves: &[Vec<f64>]) -> Vec<f64> {
    let Some(first) = curves.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|i| {
            let mut col: Vec<f64> = curves.iter().map(|c| c[i]).collect();
            median(&mut col)
        })
        .collect()
}

/// Median of a slice (mean of the middle pair for even lengths).
pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = default_ln_kappa_grid();
        assert_eq!(g.len(), 65);
        assert_eq!(g[0], -8.0);
        assert_eq!(g[64], 8.0);
        assert_eq!(g[40], 2.0);
    }

    #[test]
    fn ties_pick_smallest_kappa() {
        // all ones: every κ gives 1
        let s = kappa_sweep(&[1.0, 1.0], &default_ln_kappa_grid(), None).unwrap();
        assert_eq!(s.index_min, 0);
        assert_eq!(s.p_min, 1.0);
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(kappa_sweep(&[0.5], &[1.0, 1.0], None).is_err());
        assert!(kappa_sweep(&[0.5], &[], None).is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median_curve(&[vec![1.0, 5.0], vec![3.0, 1.0], vec![2.0, 2.0]]), vec![2.0, 2.0]);
    }
}
