//! `poolcore`: pooled p-values, rejection levels and power simulations from
//! the command line.

mod cache;
mod commands;
mod error;
mod heatmap;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "poolcore", version, about = "Pool independent p-values and study the poolers")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Significance level.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub alpha: f64,
    /// Master seed for every simulation.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Cap on worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for simulated null tables.
    #[arg(long, global = true, env = "POOLCORE_CACHE_DIR", default_value = ".poolcache")]
    pub cache_dir: PathBuf,
    /// Write output here instead of stdout. Nothing is written on failure.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Machine-readable CSV or a short human summary.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Summary,
}

/// Method selection shared by the subcommands that take poolers.
#[derive(Args, Debug, Clone, Default)]
pub struct MethodArgs {
    /// Pooler: tippett, order, stouffer, fisher, pearson, gamma, chi, hr, or a
    /// full label such as `chi(kappa=2)`. Repeatable.
    #[arg(long = "method", required = true)]
    pub methods: Vec<String>,
    /// κ values for `chi` (comma-separated list or lo:hi:n range).
    #[arg(long)]
    pub kappa: Option<String>,
    /// w values for `hr` (comma-separated list or lo:hi:n range).
    #[arg(long)]
    pub w: Option<String>,
    /// Order k for `order`, shape k for `gamma`.
    #[arg(long)]
    pub k: Option<f64>,
    /// Scale θ for `gamma`.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Per-test weights, comma-separated (quantile poolers only).
    #[arg(long)]
    pub weights: Option<String>,
}

/// Where p-values come from.
#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// Inline p-values, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
    /// File with one p-value per line or comma-separated; `-` for stdin.
    /// Without --values or --input, stdin is read.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pooled p-value of one vector for each requested method.
    Pool {
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Null table size for hr methods.
        #[arg(long, default_value_t = 100_000)]
        n_sim: usize,
    },
    /// Central level p_c, marginal level p_r and centrality quotient.
    RejectionLevels {
        #[command(flatten)]
        method: MethodArgs,
        /// Numbers of tests (comma-separated).
        #[arg(long, required = true)]
        m: String,
        /// Common value of the other p-values for p_r.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Null table size for hr methods.
        #[arg(long, default_value_t = 100_000)]
        n_sim: usize,
    },
    /// κ of the χ²_κ pooler with a given centrality quotient.
    Kappa {
        /// Target quotients (default 0.1,0.2,...,0.9).
        #[arg(long)]
        q: Option<String>,
        /// Numbers of tests (default 2,5,20,100,500,2000,10000).
        #[arg(long)]
        m: Option<String>,
    },
    /// Centrality quotients of the implemented poolers and the κ table.
    QTable {
        /// Null table size for the hr rows.
        #[arg(long, default_value_t = 100_000)]
        n_sim: usize,
    },
    /// Monte Carlo power over an (η, ln D, ln w) grid.
    Power {
        #[command(flatten)]
        method: MethodArgs,
        /// Number of tests.
        #[arg(long, default_value_t = 10)]
        m: usize,
        /// Prevalence values η.
        #[arg(long, default_value = "0,0.2,0.4,0.6,0.8,1")]
        eta: String,
        /// ln D values.
        #[arg(long, default_value = "-1,0,1,2,3", allow_hyphen_values = true)]
        divergence: String,
        /// ln w values (≤ 0).
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        ln_w: String,
        /// Replicates per cell.
        #[arg(long, default_value_t = 2000)]
        n_sim: usize,
        /// Null table size for hr methods.
        #[arg(long, default_value_t = 100_000)]
        null_n_sim: usize,
    },
    /// Counts of w settings where each κ reaches maximum power.
    Atlas {
        /// κ values compared (default e^-6, e^-3, 1, e^3, e^6).
        #[arg(long)]
        kappa: Option<String>,
        /// Number of tests.
        #[arg(long, default_value_t = 10)]
        m: usize,
        /// Prevalence values η.
        #[arg(long, default_value = "0.1,0.2,0.4,0.6,0.8,1")]
        eta: String,
        /// ln D values.
        #[arg(long, default_value = "-2:3:6", allow_hyphen_values = true)]
        divergence: String,
        /// ln w values (≤ 0).
        #[arg(long, default_value = "-6,-3,0", allow_hyphen_values = true)]
        ln_w: String,
        /// Replicates per cell.
        #[arg(long, default_value_t = 2000)]
        n_sim: usize,
        /// Smoothing standard deviation in grid cells.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Confidence of the max-power ties.
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        /// Keep cells where every κ saturates.
        #[arg(long)]
        no_corner_mask: bool,
        /// Also write an SVG heatmap of the counts.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Pooled p-value over a ln κ grid and its minimum.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        /// ln κ grid as lo:hi:n or a list.
        #[arg(long, default_value = "-8:8:65", allow_hyphen_values = true)]
        grid: String,
        /// Null simulations behind the reference quantiles.
        #[arg(long, default_value_t = 10_000)]
        null_n_sim: usize,
        /// Skip the null reference quantiles.
        #[arg(long)]
        no_null: bool,
    },
    /// Tests contributing most to a χ²_κ pooled p-value.
    Select {
        #[command(flatten)]
        input: InputArgs,
        /// κ_min of the pooler.
        #[arg(long)]
        kappa: f64,
        /// Fraction η* of tests to keep.
        #[arg(long)]
        eta: f64,
    },
    /// Draw p-value vectors from a beta alternative.
    Generate {
        /// Number of tests per vector.
        #[arg(long, default_value_t = 10)]
        m: usize,
        /// Prevalence η.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// ln D of the alternative.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "a")]
        divergence: Option<f64>,
        /// Beta shape a (instead of --divergence).
        #[arg(long)]
        a: Option<f64>,
        /// ln w of the alternative (≤ 0).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        ln_w: f64,
        /// Number of vectors.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

fn setup_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::validation("--threads must be ≥ 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::validation(format!("--threads: {e}")))?;
    }
    Ok(())
}

fn write_output(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => commands::write_atomic(path, text.as_bytes()),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("writing stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    if !(g.alpha > 0.0 && g.alpha < 1.0) {
        return Err(CliError::validation(format!("--alpha must lie in (0, 1), got {}", g.alpha)));
    }
    setup_threads(g.threads)?;
    let text = commands::dispatch(&cli.command, g)?;
    write_output(g.out.as_ref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("poolcore: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
