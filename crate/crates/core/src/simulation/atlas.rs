//! Atlas of the alternatives under which each χ²_κ pooler has maximum power.
//!
//! For every w layer the power of each κ over the (η, ln D) plane is
//! smoothed, the methods tied with the maximum are flagged, and the flags
//! are summed over w.

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::pooling::{MethodKind, MethodSpec};

use super::mask::{alt_frequency_map, corner_mask, max_power_mask, FrequencyMap};
use super::power::{power_surface, PowerGrid, SurfaceConfig};
use super::smooth::{gaussian_smooth, Grid2};

/// Atlas settings.
#[derive(Debug, Clone, PartialEq)]
pub struct AtlasConfig {
    pub kappas: Vec<f64>,
    pub eta: Vec<f64>,
    pub ln_divergence: Vec<f64>,
    pub ln_w: Vec<f64>,
    pub m: usize,
    pub alpha: f64,
    pub n_sim: usize,
    pub seed: u64,
    /// Smoothing standard deviation in grid cells.
    pub sigma: f64,
    /// Confidence of the two-proportion test behind the max-power flags.
    pub confidence: f64,
    /// Zero out cells where every κ ties near power 1 or near α.
    pub mask_corners: bool,
}

/// Result of [`atlas`].
#[derive(Debug, Clone, PartialEq)]
pub struct Atlas {
    pub config: AtlasConfig,
    pub grid: PowerGrid,
    /// Saturated cells removed from the counts.
    pub corner: Grid2<bool>,
    /// One map per κ, in `config.kappas` order.
    pub frequency: Vec<FrequencyMap>,
}

/// Power of method `im` at w layer `iw` as an (η × ln D) matrix; NaN where
/// the alternative is unreachable.
fn layer(grid: &PowerGrid, iw: usize, im: usize) -> Grid2<f64> {
    let (ne, nd) = (grid.eta.len(), grid.ln_divergence.len());
    let mut g = Grid2::filled(ne, nd, f64::NAN);
    for ie in 0..ne {
        for id in 0..nd {
            if let Some(e) = grid.get(ie, id, iw, im) {
                g.set(ie, id, e.power);
            }
        }
    }
    g
}

pub fn atlas(config: &AtlasConfig) -> Result<Atlas> {
    if config.kappas.is_empty() {
        return Err(Error::domain("at least one κ is required"));
    }
    let methods = config
        .kappas
        .iter()
        .map(|&kappa| MethodSpec::new(MethodKind::Chi { kappa }))
        .collect::<Result<Vec<_>>>()?;
    let tables = vec![None; methods.len()];
    let grid = power_surface(&SurfaceConfig {
        methods: &methods,
        tables: &tables,
        eta: &config.eta,
        ln_divergence: &config.ln_divergence,
        ln_w: &config.ln_w,
        m: config.m,
        alpha: config.alpha,
        n_sim: config.n_sim,
        seed: config.seed,
    })?;

    let raw: Vec<Vec<Grid2<f64>>> = (0..config.ln_w.len())
        .map(|iw| (0..methods.len()).map(|im| layer(&grid, iw, im)).collect())
        .collect();

    let mut masks_by_method: Vec<Vec<Grid2<bool>>> = vec![Vec::new(); methods.len()];
    for layers in &raw {
        let smoothed = layers
            .iter()
            .map(|g| gaussian_smooth(g, config.sigma))
            .collect::<Result<Vec<_>>>()?;
        let masks = max_power_mask(&smoothed, config.n_sim, config.confidence)?;
        for (im, mask) in masks.into_iter().enumerate() {
            masks_by_method[im].push(mask);
        }
    }

    let corner = if config.mask_corners {
        let se = (config.alpha * (1.0 - config.alpha) / config.n_sim as f64).sqrt();
        corner_mask(&raw, config.alpha + 2.0 * se, 0.99)?
    } else {
        Grid2::filled(config.eta.len(), config.ln_divergence.len(), false)
    };

    let frequency = masks_by_method
        .iter()
        .map(|masks| alt_frequency_map(masks, Some(&corner)))
        .collect::<Result<Vec<_>>>()?;

    Ok(Atlas {
        config: config.clone(),
        grid,
        corner,
        frequency,
    })
}

impl Atlas {
    /// One count matrix per κ: a `kappa` line, a header row of ln D values,
    /// one row per η ending in its row sum, and a final row of column sums.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (kappa, f) in self.config.kappas.iter().zip(&self.frequency) {
            out.push_str(&format!("kappa,{}\n", g17(*kappa)));
            out.push_str("eta\\ln_divergence");
            for d in &self.config.ln_divergence {
                out.push_str(&format!(",{}", g17(*d)));
            }
            out.push_str(",row_sum\n");
            for (ie, eta) in self.config.eta.iter().enumerate() {
                out.push_str(&g17(*eta));
                for id in 0..self.config.ln_divergence.len() {
                    out.push_str(&format!(",{}", f.counts.get(ie, id)));
                }
                out.push_str(&format!(",{}\n", f.row_sums[ie]));
            }
            out.push_str("col_sum");
            for c in &f.col_sums {
                out.push_str(&format!(",{c}"));
            }
            out.push_str(&format!(",{}\n\n", f.row_sums.iter().sum::<u32>()));
        }
        out
    }
}
