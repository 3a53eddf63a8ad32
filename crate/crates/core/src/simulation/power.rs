//! Monte Carlo power of pooled p-values under H3/H4 alternatives.

use crate::divergence::BetaAlt;
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::par::map_indexed;
use crate::pooling::{MethodKind, MethodSpec, NullQuantileTable};
use crate::rng::{block_rng, cell_seed, BLOCK};
use crate::sampling::AlternativeSpec;

/// Rejection rate at level α with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEstimate {
    pub power: f64,
    pub se: f64,
    pub n_sim: usize,
}

impl PowerEstimate {
    fn from_count(count: usize, n_sim: usize) -> Self {
        let power = count as f64 / n_sim as f64;
        PowerEstimate {
            power,
            se: (power * (1.0 - power) / n_sim as f64).sqrt(),
            n_sim,
        }
    }
}

type Pooler<'a> = Box<dyn Fn(&[f64]) -> f64 + Sync + Send + 'a>;

/// Resolves a method and its optional table into a pooled-p closure,
/// checking the table once up front.
fn prepare<'a>(method: &'a MethodSpec, table: Option<&'a NullQuantileTable>, m: usize) -> Result<Pooler<'a>> {
    // validates parameters, weights and the table against M
    method.pool(&vec![0.5; m], table)?;
    Ok(match method.kind {
        MethodKind::Hr { w } => {
            let table = table.expect("checked above");
            Box::new(move |p| table.p_value(crate::pooling::hr_stat(p, w)))
        }
        _ => Box::new(move |p| method.pool(p, None).unwrap_or(f64::NAN)),
    })
}

fn check_common(n_sim: usize, alpha: f64) -> Result<()> {
    if n_sim < 100 {
        return Err(Error::domain(format!("n_sim must be ≥ 100, got {n_sim}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("α must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Power of several methods on the same `n_sim` simulated vectors.
///
/// `tables[i]` is the null table for `methods[i]` (needed only for hr). The
/// vectors are drawn in blocks with independent streams of `seed`, so the
/// result does not depend on the number of threads.
pub fn power_estimates(
    methods: &[MethodSpec],
    tables: &[Option<&NullQuantileTable>],
    spec: &AlternativeSpec,
    alpha: f64,
    n_sim: usize,
    seed: u64,
) -> Result<Vec<PowerEstimate>> {
    check_common(n_sim, alpha)?;
    if tables.len() != methods.len() {
        return Err(Error::domain("one table slot per method is required"));
    }
    let poolers = methods
        .iter()
        .zip(tables)
        .map(|(m, t)| prepare(m, *t, spec.m))
        .collect::<Result<Vec<_>>>()?;
    let blocks = n_sim.div_ceil(BLOCK);
    let counts = map_indexed(blocks, |b| {
        let mut rng = block_rng(seed, b as u64);
        let reps = BLOCK.min(n_sim - b * BLOCK);
        let mut p = vec![0.0; spec.m];
        let mut hits = vec![0usize; poolers.len()];
        for _ in 0..reps {
            spec.fill(&mut rng, &mut p);
            for (h, pool) in hits.iter_mut().zip(&poolers) {
                if pool(&p) <= alpha {
                    *h += 1;
                }
            }
        }
        hits
    });
    let mut total = vec![0usize; methods.len()];
    for block in counts {
        for (t, c) in total.iter_mut().zip(block) {
            *t += c;
        }
    }
    Ok(total.into_iter().map(|c| PowerEstimate::from_count(c, n_sim)).collect())
}

/// Power of one method.
pub fn power_estimate(
    method: &MethodSpec,
    spec: &AlternativeSpec,
    alpha: f64,
    n_sim: usize,
    table: Option<&NullQuantileTable>,
    seed: u64,
) -> Result<PowerEstimate> {
    Ok(power_estimates(std::slice::from_ref(method), &[table], spec, alpha, n_sim, seed)?[0])
}

/// Power over an (η, ln D, ln w) grid for a list of methods.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerGrid {
    pub eta: Vec<f64>,
    pub ln_divergence: Vec<f64>,
    pub ln_w: Vec<f64>,
    pub methods: Vec<MethodSpec>,
    pub m: usize,
    pub alpha: f64,
    pub n_sim: usize,
    /// Indexed by [`PowerGrid::cell_index`]; `None` where the divergence is
    /// unreachable for that w.
    pub cells: Vec<Option<Vec<PowerEstimate>>>,
}

impl PowerGrid {
    pub fn cell_index(&self, i_eta: usize, i_d: usize, i_w: usize) -> usize {
        (i_eta * self.ln_divergence.len() + i_d) * self.ln_w.len() + i_w
    }

    pub fn get(&self, i_eta: usize, i_d: usize, i_w: usize, method: usize) -> Option<PowerEstimate> {
        self.cells[self.cell_index(i_eta, i_d, i_w)]
            .as_ref()
            .map(|c| c[method])
    }

    /// CSV with columns eta, ln_divergence, ln_w, method, kappa_or_w, power,
    /// se, n_sim. Unreachable cells have `absent` in power and se.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eta,ln_divergence,ln_w,method,kappa_or_w,power,se,n_sim\n");
        for (ie, eta) in self.eta.iter().enumerate() {
            for (id, ld) in self.ln_divergence.iter().enumerate() {
                for (iw, lw) in self.ln_w.iter().enumerate() {
                    for (im, method) in self.methods.iter().enumerate() {
                        let param = match method.kind {
                            MethodKind::Chi { kappa } => g17(kappa),
                            MethodKind::Hr { w } => g17(w),
                            _ => String::new(),
                        };
                        let (power, se) = match self.get(ie, id, iw, im) {
                            Some(e) => (g17(e.power), g17(e.se)),
                            None => ("absent".into(), "absent".into()),
                        };
                        out.push_str(&format!(
                            "{},{},{},\"{}\",{},{},{},{}\n",
                            g17(*eta),
                            g17(*ld),
                            g17(*lw),
                            method.label(),
                            param,
                            power,
                            se,
                            self.n_sim
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Settings shared by every cell of a power surface.
#[derive(Debug, Clone)]
pub struct SurfaceConfig<'a> {
    pub methods: &'a [MethodSpec],
    /// Null table per method (`None` for closed-form methods).
    pub tables: &'a [Option<&'a NullQuantileTable>],
    pub eta: &'a [f64],
    pub ln_divergence: &'a [f64],
    pub ln_w: &'a [f64],
    pub m: usize,
    pub alpha: f64,
    pub n_sim: usize,
    pub seed: u64,
}

/// Runs [`power_estimates`] in every grid cell. Cell (i, j, k) is seeded
/// with `cell_seed(seed, [i, j, k])`, so the grid is reproducible under any
/// execution order.
pub fn power_surface(cfg: &SurfaceConfig) -> Result<PowerGrid> {
    check_common(cfg.n_sim, cfg.alpha)?;
    if cfg.eta.is_empty() || cfg.ln_divergence.is_empty() || cfg.ln_w.is_empty() || cfg.methods.is_empty() {
        return Err(Error::domain("every grid axis and the method list must be non-empty"));
    }
    if let Some(w) = cfg.ln_w.iter().find(|lw| lw.is_nan() || **lw > 0.0) {
        return Err(Error::domain(format!("ln w must be ≤ 0, got {w}")));
    }
    let (ne, nd, nw) = (cfg.eta.len(), cfg.ln_divergence.len(), cfg.ln_w.len());
    let cells = map_indexed(ne * nd * nw, |idx| -> Result<Option<Vec<PowerEstimate>>> {
        let iw = idx % nw;
        let id = (idx / nw) % nd;
        let ie = idx / (nw * nd);
        let alt = match BetaAlt::from_divergence(cfg.ln_divergence[id].exp(), cfg.ln_w[iw].exp()) {
            Ok(alt) => alt,
            Err(Error::UnreachableDivergence { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let spec = AlternativeSpec::new(cfg.eta[ie], alt, cfg.m)?;
        let seed = cell_seed(cfg.seed, &[ie as u64, id as u64, iw as u64]);
        power_estimates(cfg.methods, cfg.tables, &spec, cfg.alpha, cfg.n_sim, seed).map(Some)
    });
    Ok(PowerGrid {
        eta: cfg.eta.to_vec(),
        ln_divergence: cfg.ln_divergence.to_vec(),
        ln_w: cfg.ln_w.to_vec(),
        methods: cfg.methods.to_vec(),
        m: cfg.m,
        alpha: cfg.alpha,
        n_sim: cfg.n_sim,
        cells: cells.into_iter().collect::<Result<Vec<_>>>()?,
    })
}
