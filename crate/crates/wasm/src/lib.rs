//! Browser bindings for the demo page: pooling a vector, rejection levels of
//! a pooler and the κ sweep. Results are tab-separated text; errors are
//! plain messages.

use poolcore::centrality::{closed_form_profile, generic_profile, DEFAULT_TOL};
use poolcore::fmt::g17;
use poolcore::pooling::MethodSpec;
use poolcore::simulation::{kappa_sweep, ln_kappa_grid};
use wasm_bindgen::prelude::wasm_bindgen;

/// Parses p-values separated by commas, whitespace or newlines.
fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| {
            let v: f64 = s.parse().map_err(|_| format!("value {}: '{s}' is not a number", i + 1))?;
            if (0.0..=1.0).contains(&v) {
                Ok(v)
            } else {
                Err(format!("value {}: {s} is outside [0, 1]", i + 1))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("enter at least one p-value".into());
    }
    Ok(values)
}

fn parse_method(label: &str) -> Result<MethodSpec, String> {
    let method: MethodSpec = label.parse().map_err(|e: poolcore::Error| e.to_string())?;
    if method.needs_table() {
        return Err(format!("{} needs a simulated null table; use the command-line tool", method.label()));
    }
    Ok(method)
}

/// Pooled p-value for each method label (one per line). Returns
/// `label<TAB>pooled_p` lines.
#[wasm_bindgen]
pub fn pool(methods: &str, values: &str) -> Result<String, String> {
    let p = parse_values(values)?;
    let mut out = String::new();
    for label in methods.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let method = parse_method(label)?;
        let v = method.pool(&p, None).map_err(|e| e.to_string())?;
        out.push_str(&format!("{}\t{}\n", method.label(), g17(v)));
    }
    if out.is_empty() {
        return Err("enter at least one method".into());
    }
    Ok(out)
}

/// Central level, marginal level and centrality quotient of one method at
/// (M, α), as `p_c<TAB>p_r<TAB>quotient<TAB>source`. Missing values read
/// `absent`.
#[wasm_bindgen]
pub fn rejection_levels(method: &str, m: u32, alpha: f64) -> Result<String, String> {
    let method = parse_method(method)?;
    let m = m as usize;
    let (profile, source) = match closed_form_profile(&method, m, alpha).map_err(|e| e.to_string())? {
        Some(p) => (p, "closed form"),
        None => (
            generic_profile(&method, m, alpha, None, DEFAULT_TOL).map_err(|e| e.to_string())?,
            "root finding",
        ),
    };
    let opt = |v: Option<f64>| v.map(g17).unwrap_or_else(|| "absent".into());
    Ok(format!(
        "{}\t{}\t{}\t{source}",
        g17(profile.p_c),
        opt(profile.p_r),
        opt(profile.quotient)
    ))
}

/// Pooled χ²_κ p-value over `n` ln κ values from `lo` to `hi`. The first
/// line is `kappa_min<TAB>ln_kappa_min<TAB>p_min`, then one
/// `ln_kappa<TAB>pooled_p` line per grid point.
#[wasm_bindgen]
pub fn sweep(values: &str, lo: f64, hi: f64, n: u32) -> Result<String, String> {
    let p = parse_values(values)?;
    if !((2..=1000).contains(&n) && lo < hi) {
        return Err("the grid needs lo < hi and 2 to 1000 points".into());
    }
    let grid = ln_kappa_grid(lo, hi, n as usize);
    let s = kappa_sweep(&p, &grid, None).map_err(|e| e.to_string())?;
    let mut out = format!("{}\t{}\t{}\n", g17(s.kappa_min), g17(grid[s.index_min]), g17(s.p_min));
    for (t, v) in grid.iter().zip(&s.pooled) {
        out.push_str(&format!("{}\t{}\n", g17(*t), g17(*v)));
    }
    Ok(out)
}
