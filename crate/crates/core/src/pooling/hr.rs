//! The HR statistic, whose null distribution has no closed form, and the
//! simulated null tables used to turn it (or any other statistic) into a
//! p-value.

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::rng::{block_rng, BLOCK};

use super::quantile::sorted_sum;

/// w Σ ln p_i − (1 − w) Σ ln(1 − p_i).
///
/// A p_i = 0 with w > 0 gives −∞ and a p_i = 1 with w < 1 gives +∞; when
/// both occur −∞ is returned. Terms with a zero coefficient are skipped, so
/// 0·ln 0 never appears.
pub fn hr_stat(p: &[f64], w: f64) -> f64 {
    let mut lower = Vec::with_capacity(p.len());
    let mut upper = Vec::with_capacity(p.len());
    let mut plus_inf = false;
    for &pi in p {
        if w > 0.0 {
            if pi == 0.0 {
                return f64::NEG_INFINITY;
            }
            lower.push(pi.ln());
        }
        if w < 1.0 {
            if pi == 1.0 {
                plus_inf = true;
            } else {
                upper.push((-pi).ln_1p());
            }
        }
    }
    if plus_inf {
        return f64::INFINITY;
    }
    w * sorted_sum(lower) - (1.0 - w) * sorted_sum(upper)
}

/// Label under which HR null tables are stored.
pub fn hr_label(w: f64) -> String {
    format!("hr(w={w})")
}

/// Sorted null distribution of a statistic, simulated from iid uniform
/// p-value vectors. Small values of the statistic are evidence against the
/// null.
#[derive(Debug, Clone, PartialEq)]
pub struct NullQuantileTable {
    pub method: String,
    pub m: usize,
    pub n_sim: usize,
    pub seed: u64,
    pub sorted_stats: Vec<f64>,
}

impl NullQuantileTable {
    /// Whether the table was built for this key.
    pub fn matches(&self, method: &str, m: usize, n_sim: usize, seed: u64) -> bool {
        self.method == method && self.m == m && self.n_sim == n_sim && self.seed == seed
    }

    /// Left-tail Monte Carlo p-value (1 + #{stats ≤ s})/(n_sim + 1).
    pub fn p_value(&self, stat: f64) -> f64 {
        let count = self.sorted_stats.partition_point(|&x| x <= stat);
        (1 + count) as f64 / (self.n_sim + 1) as f64
    }

    /// Empirical `prob` quantile: the ⌈prob·n⌉-th smallest statistic.
    pub fn quantile(&self, prob: f64) -> f64 {
        let n = self.sorted_stats.len();
        let idx = ((prob * n as f64).ceil() as usize).clamp(1, n) - 1;
        self.sorted_stats[idx]
    }

    /// Cache file contents: five header lines then one value per line.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "#method={}\n#M={}\n#n_sim={}\n#seed={}\n#format=1\n",
            self.method, self.m, self.n_sim, self.seed
        );
        for v in &self.sorted_stats {
            out.push_str(&format!("{v}\n"));
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output, checking length and order.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut method = None;
        let mut m = None;
        let mut n_sim = None;
        let mut seed = None;
        let mut format = None;
        let mut stats = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::domain(format!("table line {}: {what}", lineno + 1));
            if let Some(header) = line.strip_prefix('#') {
                let (key, value) = header.split_once('=').ok_or_else(|| bad("malformed header"))?;
                match key {
                    "method" => method = Some(value.to_string()),
                    "M" => m = Some(value.parse::<usize>().map_err(|_| bad("bad M"))?),
                    "n_sim" => n_sim = Some(value.parse::<usize>().map_err(|_| bad("bad n_sim"))?),
                    "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("bad seed"))?),
                    "format" => format = Some(value.to_string()),
                    _ => return Err(bad("unknown header key")),
                }
            } else {
                stats.push(line.parse::<f64>().map_err(|_| bad("not a number"))?);
            }
        }
        if format.as_deref() != Some("1") {
            return Err(Error::domain("table: missing or unsupported #format"));
        }
        let (Some(method), Some(m), Some(n_sim), Some(seed)) = (method, m, n_sim, seed) else {
            return Err(Error::domain("table: incomplete header"));
        };
        if stats.len() != n_sim {
            return Err(Error::domain(format!(
                "table: header says {n_sim} values, found {}",
                stats.len()
            )));
        }
        if stats.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("table: values are not ascending"));
        }
        Ok(NullQuantileTable {
            method,
            m,
            n_sim,
            seed,
            sorted_stats: stats,
        })
    }
}

/// Simulates `n_sim` values of `stat` on iid uniform vectors of length `m`.
///
/// Work is split into blocks of [`BLOCK`] replicates, each with its own RNG
/// stream, so the table is identical for any thread count.
pub fn simulate_table<F>(
    method: impl Into<String>,
    m: usize,
    n_sim: usize,
    seed: u64,
    stat: F,
) -> Result<NullQuantileTable>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    if n_sim < 1000 {
        return Err(Error::domain(format!("n_sim must be ≥ 1000, got {n_sim}")));
    }
    if m == 0 {
        return Err(Error::domain("M must be ≥ 1"));
    }
    let blocks = n_sim.div_ceil(BLOCK);
    let parts = map_indexed(blocks, |b| {
        let mut rng = block_rng(seed, b as u64);
        let count = BLOCK.min(n_sim - b * BLOCK);
        let mut p = vec![0.0; m];
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            for v in p.iter_mut() {
                *v = rng.sample(Open01);
            }
            out.push(stat(&p));
        }
        out
    });
    let mut sorted_stats: Vec<f64> = parts.into_iter().flatten().collect();
    sorted_stats.sort_by(f64::total_cmp);
    Ok(NullQuantileTable {
        method: method.into(),
        m,
        n_sim,
        seed,
        sorted_stats,
    })
}

/// Null table of the HR statistic with weight `w`.
pub fn simulate_hr_table(w: f64, m: usize, n_sim: usize, seed: u64) -> Result<NullQuantileTable> {
    check_w(w)?;
    simulate_table(hr_label(w), m, n_sim, seed, |p| hr_stat(p, w))
}

pub(crate) fn check_w(w: f64) -> Result<()> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(Error::domain(format!("w must lie in [0, 1], got {w}")))
    }
}

/// HR pooled p-value: the left-tail rank of hr_stat(p, w) in the null table.
pub fn hr_pool(p: &[f64], w: f64, table: &NullQuantileTable) -> Result<f64> {
    check_w(w)?;
    let label = hr_label(w);
    if table.method != label || table.m != p.len() {
        return Err(Error::domain(format!(
            "null table is for {} with M = {}, needed {label} with M = {}",
            table.method,
            table.m,
            p.len()
        )));
    }
    Ok(table.p_value(hr_stat(p, w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stat_example() {
        let want = 0.5 * (0.1f64.ln() + 0.2f64.ln()) - 0.5 * (0.9f64.ln() + 0.8f64.ln());
        assert!((hr_stat(&[0.1, 0.2], 0.5) - want).abs() < 1e-15);
        assert!((want + 1.791_759).abs() < 1e-6);
    }

    #[test]
    fn stat_sentinels() {
        assert_eq!(hr_stat(&[0.0, 0.5], 0.5), f64::NEG_INFINITY);
        assert_eq!(hr_stat(&[1.0, 0.5], 0.5), f64::INFINITY);
        assert_eq!(hr_stat(&[0.0, 1.0], 0.5), f64::NEG_INFINITY);
        // zero coefficients never produce 0·∞
        assert!(hr_stat(&[0.0, 0.5], 0.0).is_finite());
        assert!(hr_stat(&[1.0, 0.5], 1.0).is_finite());
    }

    #[test]
    fn text_round_trip() {
        let t = simulate_hr_table(0.3, 4, 1500, 9).unwrap();
        let back = NullQuantileTable::from_text(&t.to_text()).unwrap();
        assert_eq!(t, back);
        assert!(NullQuantileTable::from_text("#method=x\n#M=1\n#n_sim=2\n#seed=1\n#format=1\n1\n").is_err());
    }

    #[test]
    fn pool_rejects_wrong_table() {
        let t = simulate_hr_table(1.0, 3, 1000, 1).unwrap();
        assert!(hr_pool(&[0.1, 0.2], 1.0, &t).is_err());
        assert!(hr_pool(&[0.1, 0.2, 0.3], 0.5, &t).is_err());
        assert!(hr_pool(&[0.1, 0.2, 0.3], 1.0, &t).is_ok());
    }
}
