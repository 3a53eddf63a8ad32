//! One function per subcommand. Each returns the complete output text, so a
//! failure part way through never leaves partial CSV behind.

use std::fs;
use std::path::Path;

use poolcore::centrality::{
    central_level_generic, chi_kappa, closed_form_profile, generic_profile, marginal_level_generic, KappaAdvice,
    DEFAULT_TOL,
};
use poolcore::divergence::BetaAlt;
use poolcore::fmt::{g17, g4};
use poolcore::pooling::{hr_label, simulate_hr_table, MethodKind, MethodSpec, NullQuantileTable};
use poolcore::rng::block_rng;
use poolcore::sampling::AlternativeSpec;
use poolcore::simulation::{
    atlas, kappa_sweep, ln_kappa_grid, power_surface, select_tests, simulate_sweep_null, sweep_label, AtlasConfig,
    SurfaceConfig,
};

use crate::cache::Cache;
use crate::error::{CliError, CliResult};
use crate::input::{parse_counts, parse_grid, read_p_values};
use crate::{heatmap, Command, Format, GlobalArgs, InputArgs, MethodArgs};

/// Quotients of the κ lookup table.
const TABLE_Q: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
/// Numbers of tests of the κ lookup table.
const TABLE_M: [usize; 7] = [2, 5, 20, 100, 500, 2000, 10000];
/// Numbers of tests of the quotient table.
const QTABLE_M: [usize; 4] = [2, 5, 10, 20];

pub fn dispatch(cmd: &Command, g: &GlobalArgs) -> CliResult<String> {
    match cmd {
        Command::Pool { method, input, n_sim } => pool(g, method, input, *n_sim),
        Command::RejectionLevels { method, m, b, n_sim } => rejection_levels(g, method, m, *b, *n_sim),
        Command::Kappa { q, m } => kappa(g, q.as_deref(), m.as_deref()),
        Command::QTable { n_sim } => q_table(g, *n_sim),
        Command::Power {
            method,
            m,
            eta,
            divergence,
            ln_w,
            n_sim,
            null_n_sim,
        } => power(g, method, *m, eta, divergence, ln_w, *n_sim, *null_n_sim),
        Command::Atlas {
            kappa,
            m,
            eta,
            divergence,
            ln_w,
            n_sim,
            sigma,
            confidence,
            no_corner_mask,
            svg,
        } => {
            let config = AtlasConfig {
                kappas: match kappa {
                    Some(k) => parse_grid(k, "--kappa")?,
                    None => [-6.0f64, -3.0, 0.0, 3.0, 6.0].iter().map(|t| t.exp()).collect(),
                },
                eta: parse_grid(eta, "--eta")?,
                ln_divergence: parse_grid(divergence, "--divergence")?,
                ln_w: parse_grid(ln_w, "--ln-w")?,
                m: *m,
                alpha: g.alpha,
                n_sim: *n_sim,
                seed: g.seed,
                sigma: *sigma,
                confidence: *confidence,
                mask_corners: !no_corner_mask,
            };
            atlas_cmd(g, &config, svg.as_deref())
        }
        Command::Sweep {
            input,
            grid,
            null_n_sim,
            no_null,
        } => sweep(g, input, grid, *null_n_sim, *no_null),
        Command::Select { input, kappa, eta } => select(g, input, *kappa, *eta),
        Command::Generate {
            m,
            eta,
            divergence,
            a,
            ln_w,
            count,
        } => generate(g, *m, *eta, *divergence, *a, *ln_w, *count),
    }
}

/// Writes `bytes` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, bytes)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| {
            let _ = fs::remove_file(&tmp);
            CliError::Io(format!("writing {}: {e}", path.display()))
        })
}

/// Comment header echoing the effective configuration.
fn header(cmd: &str, config: &[(&str, String)]) -> String {
    let mut out = format!("# poolcore {} {cmd}\n", env!("CARGO_PKG_VERSION"));
    for (k, v) in config {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out
}

/// Shortest text that parses back to the same double, for config echoes.
fn rt(x: f64) -> String {
    x.to_string()
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| rt(*v)).collect::<Vec<_>>().join(",")
}

fn opt(v: Option<f64>, f: fn(f64) -> String) -> String {
    v.map(f).unwrap_or_else(|| "absent".into())
}

/// Expands the method flags into method specs. A bare `chi` or `hr` yields
/// one method per listed κ or w.
pub fn resolve_methods(args: &MethodArgs) -> CliResult<Vec<MethodSpec>> {
    let mut methods = Vec::new();
    let (mut used_kappa, mut used_w, mut used_k, mut used_theta) = (false, false, false, false);
    for name in &args.methods {
        let lower = name.trim().to_ascii_lowercase();
        if lower.contains('(') {
            methods.push(name.parse::<MethodSpec>()?);
            continue;
        }
        match lower.as_str() {
            "chi" => {
                let list = args
                    .kappa
                    .as_deref()
                    .ok_or_else(|| CliError::validation("--method chi needs --kappa"))?;
                used_kappa = true;
                for kappa in parse_grid(list, "--kappa")? {
                    methods.push(MethodSpec::new(MethodKind::Chi { kappa })?);
                }
            }
            "hr" => {
                let list = args.w.as_deref().ok_or_else(|| CliError::validation("--method hr needs --w"))?;
                used_w = true;
                for w in parse_grid(list, "--w")? {
                    methods.push(MethodSpec::new(MethodKind::Hr { w })?);
                }
            }
            "order" => {
                let k = args.k.ok_or_else(|| CliError::validation("--method order needs --k"))?;
                used_k = true;
                if k.fract() != 0.0 || k < 1.0 {
                    return Err(CliError::validation(format!("--k must be a positive integer for order, got {k}")));
                }
                methods.push(MethodSpec::new(MethodKind::Order { k: k as usize })?);
            }
            "gamma" => {
                let k = args.k.ok_or_else(|| CliError::validation("--method gamma needs --k"))?;
                used_k = true;
                used_theta = args.theta.is_some();
                let theta = args.theta.unwrap_or(1.0);
                methods.push(MethodSpec::new(MethodKind::Gamma { k, theta })?);
            }
            _ => methods.push(lower.parse::<MethodSpec>()?),
        }
    }
    for (given, used, flag) in [
        (args.kappa.is_some(), used_kappa, "--kappa"),
        (args.w.is_some(), used_w, "--w"),
        (args.k.is_some(), used_k, "--k"),
        (args.theta.is_some(), used_theta, "--theta"),
    ] {
        if given && !used {
            return Err(CliError::validation(format!("{flag} is not used by any requested method")));
        }
    }
    if let Some(text) = &args.weights {
        let weights = parse_grid(text, "--weights")?;
        methods = methods
            .into_iter()
            .map(|m| m.with_weights(weights.clone()))
            .collect::<poolcore::Result<_>>()?;
    }
    Ok(methods)
}

fn method_labels(methods: &[MethodSpec]) -> String {
    methods.iter().map(|m| m.label()).collect::<Vec<_>>().join(";")
}

/// Null tables for the hr methods in `methods`, loaded from or stored in the
/// cache; `None` for closed-form methods.
fn hr_tables(
    g: &GlobalArgs,
    methods: &[MethodSpec],
    m: usize,
    n_sim: usize,
) -> CliResult<Vec<Option<NullQuantileTable>>> {
    let cache = Cache::new(&g.cache_dir);
    methods
        .iter()
        .map(|method| match method.kind {
            MethodKind::Hr { w } => cache
                .load_or_build(&hr_label(w), m, n_sim, g.seed, || simulate_hr_table(w, m, n_sim, g.seed))
                .map(Some),
            _ => Ok(None),
        })
        .collect()
}

fn pool(g: &GlobalArgs, args: &MethodArgs, input: &InputArgs, n_sim: usize) -> CliResult<String> {
    let methods = resolve_methods(args)?;
    let (p, source) = read_p_values(input.values.as_deref(), input.input.as_deref())?;
    let tables = hr_tables(g, &methods, p.len(), n_sim)?;
    let mut config = vec![
        ("input", source),
        ("m", p.len().to_string()),
        ("methods", method_labels(&methods)),
    ];
    if methods.iter().any(MethodSpec::needs_table) {
        config.push(("null_n_sim", n_sim.to_string()));
        config.push(("seed", g.seed.to_string()));
    }
    let mut csv = String::from("method,pooled_p\n");
    let mut summary = String::new();
    for (method, table) in methods.iter().zip(&tables) {
        let v = method.pool(&p, table.as_ref())?;
        csv.push_str(&format!("\"{}\",{}\n", method.label(), g17(v)));
        summary.push_str(&format!("{}: {}\n", method.label(), g4(v)));
    }
    Ok(header("pool", &config) + if g.format == Format::Csv { &csv } else { &summary })
}

fn rejection_levels(g: &GlobalArgs, args: &MethodArgs, m_list: &str, b: f64, n_sim: usize) -> CliResult<String> {
    let methods = resolve_methods(args)?;
    let ms = parse_counts(m_list, "--m")?;
    if !(b > 0.0 && b <= 1.0) {
        return Err(CliError::validation(format!("--b must lie in (0, 1], got {b}")));
    }
    let mut config = vec![
        ("methods", method_labels(&methods)),
        ("m", m_list.to_string()),
        ("alpha", rt(g.alpha)),
        ("b", rt(b)),
    ];
    if methods.iter().any(MethodSpec::needs_table) {
        config.push(("null_n_sim", n_sim.to_string()));
        config.push(("seed", g.seed.to_string()));
    }
    let mut csv = String::from("method,m,alpha,b,source,p_c,p_r,quotient,agreement\n");
    let mut summary = String::new();
    for &m in &ms {
        let tables = hr_tables(g, &methods, m, n_sim)?;
        for (method, table) in methods.iter().zip(&tables) {
            let closed = if b == 1.0 {
                closed_form_profile(method, m, g.alpha)?
            } else {
                None
            };
            let pool = |p: &[f64]| method.pool(p, table.as_ref()).unwrap_or(f64::NAN);
            // surface a missing table or bad weights as an error, not NaN
            method.pool(&vec![0.5; m], table.as_ref())?;
            let p_c = central_level_generic(pool, m, g.alpha, DEFAULT_TOL)?;
            let p_r = marginal_level_generic(pool, m, g.alpha, b, DEFAULT_TOL)?;
            let generic = poolcore::centrality::RejectionProfile::new(p_c, p_r, g.alpha, m);
            let label = method.label();
            let row = |source: &str, pc: f64, pr: Option<f64>, q: Option<f64>, agreement: &str| {
                format!(
                    "\"{label}\",{m},{},{},{source},{},{},{},{agreement}\n",
                    rt(g.alpha),
                    g17(b),
                    g17(pc),
                    opt(pr, g17),
                    opt(q, g17)
                )
            };
            let mut agreement = String::new();
            if let Some(c) = &closed {
                csv.push_str(&row("closed", c.p_c, c.p_r, c.quotient, ""));
                let pr_diff = match (c.p_r, generic.p_r) {
                    (Some(x), Some(y)) => (x - y).abs(),
                    (None, None) => 0.0,
                    _ => f64::INFINITY,
                };
                let diff = (c.p_c - generic.p_c).abs().max(pr_diff);
                agreement = if diff > 1e-6 {
                    eprintln!("warning: {label} at M = {m}: closed form and generic levels differ by {}", g4(diff));
                    "disagree".into()
                } else {
                    "agree".into()
                };
            }
            csv.push_str(&row("generic", generic.p_c, generic.p_r, generic.quotient, &agreement));
            let best = closed.unwrap_or(generic);
            summary.push_str(&format!(
                "{label} M={m}: p_c={} p_r={} q={}{}\n",
                g4(best.p_c),
                opt(best.p_r, g4),
                opt(best.quotient, g4),
                if agreement == "disagree" { " (closed/generic disagree)" } else { "" }
            ));
        }
    }
    Ok(header("rejection-levels", &config) + if g.format == Format::Csv { &csv } else { &summary })
}

/// CSV rows m,q,kappa,log10_kappa,advice for a grid of (M, q).
fn kappa_rows(ms: &[usize], qs: &[f64], alpha: f64) -> CliResult<(String, String)> {
    let mut csv = String::from("m,q,kappa,log10_kappa,advice\n");
    let mut summary = format!("log10 kappa by M (rows) and q = {}\n", qs.iter().map(|q| g4(*q)).collect::<Vec<_>>().join(" "));
    for &m in ms {
        summary.push_str(&format!("M={m}:"));
        for &q in qs {
            let (kappa, log10, advice) = match chi_kappa(q, m, alpha)? {
                KappaAdvice::Kappa(k) => (g17(k), g17(k.log10()), "chi".to_string()),
                KappaAdvice::UseTippett => ("absent".into(), "absent".into(), "tippett".into()),
                KappaAdvice::UseStouffer => ("absent".into(), "absent".into(), "stouffer".into()),
            };
            summary.push_str(&format!(
                " {}",
                log10.parse::<f64>().map(g4).unwrap_or_else(|_| advice.clone())
            ));
            csv.push_str(&format!("{m},{},{kappa},{log10},{advice}\n", g17(q)));
        }
        summary.push('\n');
    }
    Ok((csv, summary))
}

fn kappa(g: &GlobalArgs, q: Option<&str>, m: Option<&str>) -> CliResult<String> {
    let qs = match q {
        Some(text) => parse_grid(text, "--q")?,
        None => TABLE_Q.to_vec(),
    };
    let ms = match m {
        Some(text) => parse_counts(text, "--m")?,
        None => TABLE_M.to_vec(),
    };
    let config = [
        ("q", join(&qs)),
        ("m", ms.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")),
        ("alpha", rt(g.alpha)),
    ];
    let (csv, summary) = kappa_rows(&ms, &qs, g.alpha)?;
    Ok(header("kappa", &config) + if g.format == Format::Csv { &csv } else { &summary })
}

fn q_table(g: &GlobalArgs, n_sim: usize) -> CliResult<String> {
    let methods: Vec<MethodSpec> = [
        MethodKind::Order { k: 1 },
        MethodKind::Chi { kappa: 1.0 },
        MethodKind::Fisher,
        MethodKind::Stouffer,
        MethodKind::Hr { w: (-6.0f64).exp() },
        MethodKind::Hr { w: (-3.0f64).exp() },
        MethodKind::Hr { w: 1.0 },
    ]
    .into_iter()
    .map(MethodSpec::new)
    .collect::<poolcore::Result<_>>()?;
    let config = [
        ("alpha", rt(g.alpha)),
        ("null_n_sim", n_sim.to_string()),
        ("seed", g.seed.to_string()),
    ];
    let mut csv = String::from("# centrality quotients\nmethod,m,p_c,p_r,quotient\n");
    let mut summary = format!("centrality quotient by M = {:?}\n", QTABLE_M);
    let mut rows: Vec<(String, Vec<Option<f64>>)> = methods.iter().map(|m| (m.label(), Vec::new())).collect();
    for &m in &QTABLE_M {
        let tables = hr_tables(g, &methods, m, n_sim)?;
        for ((method, table), row) in methods.iter().zip(&tables).zip(rows.iter_mut()) {
            let profile = match closed_form_profile(method, m, g.alpha)? {
                Some(p) => p,
                None => generic_profile(method, m, g.alpha, table.as_ref(), DEFAULT_TOL)?,
            };
            csv.push_str(&format!(
                "\"{}\",{m},{},{},{}\n",
                method.label(),
                g17(profile.p_c),
                opt(profile.p_r, g17),
                opt(profile.quotient, g17)
            ));
            row.1.push(profile.quotient);
        }
    }
    for (label, qs) in rows {
        let cells: Vec<String> = qs.into_iter().map(|q| opt(q, g4)).collect();
        summary.push_str(&format!("{label}: {}\n", cells.join(" ")));
    }
    let (kcsv, ksummary) = kappa_rows(&TABLE_M, &TABLE_Q, g.alpha)?;
    csv.push_str("\n# kappa by target quotient\n");
    csv.push_str(&kcsv);
    summary.push('\n');
    summary.push_str(&ksummary);
    Ok(header("q-table", &config) + if g.format == Format::Csv { &csv } else { &summary })
}

#[allow(clippy::too_many_arguments)]
fn power(
    g: &GlobalArgs,
    args: &MethodArgs,
    m: usize,
    eta: &str,
    divergence: &str,
    ln_w: &str,
    n_sim: usize,
    null_n_sim: usize,
) -> CliResult<String> {
    let methods = resolve_methods(args)?;
    let eta = parse_grid(eta, "--eta")?;
    let ln_d = parse_grid(divergence, "--divergence")?;
    let ln_w = parse_grid(ln_w, "--ln-w")?;
    let owned = hr_tables(g, &methods, m, null_n_sim)?;
    let tables: Vec<Option<&NullQuantileTable>> = owned.iter().map(Option::as_ref).collect();
    let grid = power_surface(&SurfaceConfig {
        methods: &methods,
        tables: &tables,
        eta: &eta,
        ln_divergence: &ln_d,
        ln_w: &ln_w,
        m,
        alpha: g.alpha,
        n_sim,
        seed: g.seed,
    })?;
    let mut config = vec![
        ("methods", method_labels(&methods)),
        ("m", m.to_string()),
        ("eta", join(&eta)),
        ("ln_divergence", join(&ln_d)),
        ("ln_w", join(&ln_w)),
        ("alpha", rt(g.alpha)),
        ("n_sim", n_sim.to_string()),
        ("seed", g.seed.to_string()),
    ];
    if methods.iter().any(MethodSpec::needs_table) {
        config.push(("null_n_sim", null_n_sim.to_string()));
    }
    let body = match g.format {
        Format::Csv => grid.to_csv(),
        Format::Summary => {
            let mut s = String::new();
            for (ie, e) in eta.iter().enumerate() {
                for (id, d) in ln_d.iter().enumerate() {
                    for (iw, w) in ln_w.iter().enumerate() {
                        s.push_str(&format!("eta={} lnD={} lnw={}:", g4(*e), g4(*d), g4(*w)));
                        for (im, method) in methods.iter().enumerate() {
                            match grid.get(ie, id, iw, im) {
                                Some(est) => s.push_str(&format!(" {}={}±{}", method.label(), g4(est.power), g4(est.se))),
                                None => s.push_str(&format!(" {}=absent", method.label())),
                            }
                        }
                        s.push('\n');
                    }
                }
            }
            s
        }
    };
    let absent = grid.cells.iter().filter(|c| c.is_none()).count();
    if absent > 0 {
        eprintln!("note: {absent} of {} cells have an unreachable divergence and are marked absent", grid.cells.len());
    }
    Ok(header("power", &config) + &body)
}

fn atlas_cmd(g: &GlobalArgs, config: &AtlasConfig, svg: Option<&Path>) -> CliResult<String> {
    let result = atlas(config)?;
    let echo = [
        ("kappa", join(&config.kappas)),
        ("m", config.m.to_string()),
        ("eta", join(&config.eta)),
        ("ln_divergence", join(&config.ln_divergence)),
        ("ln_w", join(&config.ln_w)),
        ("alpha", rt(config.alpha)),
        ("n_sim", config.n_sim.to_string()),
        ("seed", config.seed.to_string()),
        ("sigma", rt(config.sigma)),
        ("confidence", rt(config.confidence)),
        ("mask_corners", config.mask_corners.to_string()),
    ];
    if let Some(path) = svg {
        write_atomic(path, heatmap::render(&result).as_bytes())?;
    }
    let body = match g.format {
        Format::Csv => result.to_csv(),
        Format::Summary => {
            let mut s = String::new();
            for (kappa, f) in config.kappas.iter().zip(&result.frequency) {
                let rows: Vec<String> = f.row_sums.iter().map(|c| c.to_string()).collect();
                s.push_str(&format!(
                    "kappa={}: total={} by eta=[{}]\n",
                    g4(*kappa),
                    f.row_sums.iter().sum::<u32>(),
                    rows.join(" ")
                ));
            }
            s
        }
    };
    Ok(header("atlas", &echo) + &body)
}

fn sweep(g: &GlobalArgs, input: &InputArgs, grid_text: &str, null_n_sim: usize, no_null: bool) -> CliResult<String> {
    let (p, source) = read_p_values(input.values.as_deref(), input.input.as_deref())?;
    let grid = parse_grid(grid_text, "--grid")?;
    let m = p.len();
    let table = if no_null {
        None
    } else {
        let build = || simulate_sweep_null(&grid, m, null_n_sim, g.seed);
        // the cache key names a grid by its ends and length, so only evenly
        // spaced grids are cached
        let even = ln_kappa_grid(grid[0], grid[grid.len() - 1], grid.len());
        let is_even = even.iter().zip(&grid).all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0));
        Some(if is_even {
            Cache::new(&g.cache_dir).load_or_build(&sweep_label(&grid), m, null_n_sim, g.seed, build)?
        } else {
            build()?
        })
    };
    let result = kappa_sweep(&p, &grid, table.as_ref())?;
    let mut config = vec![
        ("input", source),
        ("m", m.to_string()),
        ("grid", grid_text.to_string()),
    ];
    if !no_null {
        config.push(("null_n_sim", null_n_sim.to_string()));
        config.push(("seed", g.seed.to_string()));
    }
    let body = match g.format {
        Format::Csv => {
            let mut s: String = result.summary().lines().map(|l| format!("# {l}\n")).collect();
            s.push_str(&result.to_csv());
            s
        }
        Format::Summary => result.summary(),
    };
    Ok(header("sweep", &config) + &body)
}

fn select(g: &GlobalArgs, input: &InputArgs, kappa: f64, eta: f64) -> CliResult<String> {
    let (p, source) = read_p_values(input.values.as_deref(), input.input.as_deref())?;
    let chosen = select_tests(&p, kappa, eta)?;
    let config = [
        ("input", source),
        ("m", p.len().to_string()),
        ("kappa", rt(kappa)),
        ("eta", rt(eta)),
    ];
    let body = match g.format {
        Format::Csv => {
            let mut s = String::from("rank,index,p_value\n");
            for (rank, &i) in chosen.iter().enumerate() {
                s.push_str(&format!("{},{},{}\n", rank + 1, i + 1, g17(p[i])));
            }
            s
        }
        Format::Summary => {
            let idx: Vec<String> = chosen.iter().map(|i| (i + 1).to_string()).collect();
            format!("selected {} of {} tests: {}\n", chosen.len(), p.len(), idx.join(" "))
        }
    };
    Ok(header("select", &config) + &body)
}

fn generate(
    g: &GlobalArgs,
    m: usize,
    eta: f64,
    divergence: Option<f64>,
    a: Option<f64>,
    ln_w: f64,
    count: usize,
) -> CliResult<String> {
    if ln_w.is_nan() || ln_w > 0.0 {
        return Err(CliError::validation(format!("--ln-w must be ≤ 0, got {ln_w}")));
    }
    let w = ln_w.exp();
    let alt = match (divergence, a) {
        (Some(ln_d), None) => BetaAlt::from_divergence(ln_d.exp(), w)?,
        (None, Some(a)) => BetaAlt::from_a_w(a, w)?,
        _ => return Err(CliError::validation("give one of --divergence or --a")),
    };
    let spec = AlternativeSpec::new(eta, alt, m)?;
    let config = [
        ("m", m.to_string()),
        ("eta", rt(eta)),
        ("beta_a", rt(alt.a)),
        ("beta_b", rt(alt.b)),
        ("n_alt", spec.n_alt().to_string()),
        ("count", count.to_string()),
        ("seed", g.seed.to_string()),
    ];
    let fmt = if g.format == Format::Csv { g17 } else { g4 };
    let mut out = header("generate", &config);
    let mut buf = vec![0.0; m];
    for i in 0..count {
        spec.fill(&mut block_rng(g.seed, i as u64), &mut buf);
        out.push_str(&buf.iter().map(|v| fmt(*v)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    Ok(out)
}
