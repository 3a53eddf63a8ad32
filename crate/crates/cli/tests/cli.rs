use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_poolcore"))
}

/// Fresh scratch directory under the target dir, used as cwd and cache.
fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().args(args).current_dir(dir).env_remove("POOLCORE_CACHE_DIR").output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Data lines (no `#` comments) split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn pooled(dir: &Path, args: &[&str]) -> f64 {
    let out = ok(dir, args);
    let r = rows(&out);
    assert_eq!(r[0], ["method", "pooled_p"]);
    r[1].last().unwrap().parse().unwrap()
}

#[test]
fn pool_examples() {
    let dir = scratch("pool_examples");
    let v = pooled(&dir, &["pool", "--method", "chi", "--kappa", "2", "--values", "0.1,0.1"]);
    // Fisher: 1 − F_χ²₄(−2 ln 0.01) = 0.01·(1 + ln 100)
    assert!((v - 0.01 * (1.0 + 100f64.ln())).abs() < 1e-12, "{v}");
    assert!((v - 0.056052).abs() < 5e-7);
    let v = pooled(&dir, &["pool", "--method", "order", "--k", "1", "--values", "0.1,0.7"]);
    assert!((v - 0.19).abs() < 1e-12, "{v}");
    let v = pooled(&dir, &["pool", "--method", "stouffer", "--values", "0.5,0.5,0.5"]);
    assert!((v - 0.5).abs() < 1e-12, "{v}");
    let v = pooled(&dir, &["pool", "--method", "chi(kappa=2)", "--values", "0.1,0.1"]);
    assert!((v - 0.056052).abs() < 5e-7);
}

#[test]
fn pool_reads_stdin_and_files() {
    let dir = scratch("pool_inputs");
    let mut child = bin()
        .args(["pool", "--method", "tippett", "--method", "fisher"])
        .current_dir(&dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"# two tests\n0.1\n0.7 # second\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let r = rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(r.len(), 3);
    assert!((r[1][1].parse::<f64>().unwrap() - 0.19).abs() < 1e-12);

    std::fs::write(dir.join("p.txt"), "0.5, 0.5\n0.5\n").unwrap();
    let v = pooled(&dir, &["pool", "--method", "stouffer", "--input", "p.txt"]);
    assert!((v - 0.5).abs() < 1e-12);
}

#[test]
fn weighted_stouffer() {
    let dir = scratch("weighted");
    let v = pooled(
        &dir,
        &["pool", "--method", "stouffer", "--weights", "1,1", "--values", "0.5,0.5"],
    );
    assert!((v - 0.5).abs() < 1e-12);
    let out = run(&dir, &["pool", "--method", "fisher", "--weights", "1,2", "--values", "0.5,0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hr_pool_uses_cache_dir_from_env() {
    let dir = scratch("hr_cache");
    let cache = dir.join("tables");
    let args = ["pool", "--method", "hr", "--w", "1", "--n-sim", "1999", "--values", "0.01,0.02,0.5"];
    let first = bin()
        .args(args)
        .current_dir(&dir)
        .env("POOLCORE_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert!(first.status.success());
    assert!(String::from_utf8_lossy(&first.stderr).contains("simulating"));
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = bin()
        .args(args)
        .current_dir(&dir)
        .env("POOLCORE_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert!(second.status.success());
    assert!(!String::from_utf8_lossy(&second.stderr).contains("simulating"));
    assert_eq!(first.stdout, second.stdout);
    // Monte Carlo p-values live on the grid k/(n_sim + 1)
    let v: f64 = rows(std::str::from_utf8(&first.stdout).unwrap())[1][1].parse().unwrap();
    let k = v * 2000.0;
    assert!((k - k.round()).abs() < 1e-9 && v > 0.0 && v < 0.2, "{v}");
}

#[test]
fn rejection_level_examples() {
    let dir = scratch("rejection");
    let out = ok(&dir, &["rejection-levels", "--method", "order", "--k", "1", "--m", "5"]);
    let r = rows(&out);
    assert_eq!(r[0][4..8], ["source", "p_c", "p_r", "quotient"]);
    let want = 1.0 - 0.95f64.powf(0.2);
    for row in &r[1..] {
        let pc: f64 = row[5].parse().unwrap();
        let pr: f64 = row[6].parse().unwrap();
        assert!((pc - 0.010206).abs() < 5e-7 && (pc - want).abs() < 1e-9);
        assert!((pr - pc).abs() < 1e-9);
    }
    assert_eq!(r[2][8], "agree");

    let out = ok(&dir, &["rejection-levels", "--method", "order", "--k", "2", "--m", "2"]);
    let r = rows(&out);
    assert_eq!(r[1][6], "absent");
    assert_eq!(r[1][7], "absent");

    let out = ok(&dir, &["rejection-levels", "--method", "chi", "--kappa", "2", "--m", "2"]);
    for row in &rows(&out)[1..] {
        let q: f64 = row[7].parse().unwrap();
        assert!((q - 0.91).abs() <= 0.01, "{q}");
    }
}

#[test]
fn kappa_examples() {
    let dir = scratch("kappa");
    let out = ok(&dir, &["kappa", "--q", "0.5,0.2", "--m", "2,5"]);
    let r = rows(&out);
    let lookup = |m: &str, q: f64| -> f64 {
        r.iter()
            .find(|row| row[0] == m && row[1].parse::<f64>().unwrap() == q)
            .unwrap()[3]
            .parse()
            .unwrap()
    };
    assert!((lookup("2", 0.5) + 0.9).abs() <= 0.1);
    assert!((lookup("5", 0.2) + 2.5).abs() <= 0.1);

    let out = ok(&dir, &["kappa"]);
    let r = rows(&out);
    assert_eq!(r.len(), 1 + 63);
    for row in r[1..].chunks(9) {
        let values: Vec<f64> = row.iter().map(|x| x[3].parse().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]), "{values:?}");
    }
}

#[test]
fn q_table_lists_both_tables() {
    let dir = scratch("qtable");
    let out = ok(&dir, &["q-table", "--n-sim", "2000"]);
    assert!(out.contains("# centrality quotients"));
    assert!(out.contains("# kappa by target quotient"));
    let fisher: Vec<_> = rows(&out).into_iter().filter(|r| r[0] == "\"fisher\"").collect();
    assert_eq!(fisher.len(), 4);
    let q: f64 = fisher[0][4].parse().unwrap();
    assert!((q - 0.91).abs() <= 0.01);
}

#[test]
fn validation_errors_exit_2() {
    let dir = scratch("errors");
    for (args, needle) in [
        (vec!["pool", "--method", "fisher", "--values", "0.1,abc"], "line 1"),
        (vec!["pool", "--method", "fisher", "--values", "0.1,1.5"], "outside"),
        (vec!["pool", "--method", "nope", "--values", "0.1"], "unknown method"),
        (vec!["pool", "--method", "chi", "--values", "0.1"], "--kappa"),
        (vec!["pool", "--method", "fisher", "--kappa", "2", "--values", "0.1"], "not used"),
        (vec!["pool", "--method", "fisher", "--alpha", "1.5", "--values", "0.1"], "alpha"),
        (vec!["pool", "--bogus"], "unexpected argument"),
        (vec!["select", "--kappa", "2", "--eta", "0", "--values", "0.1"], "η*"),
        (vec!["power", "--method", "fisher", "--n-sim", "10"], "n_sim"),
    ] {
        let out = run(&dir, &args);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {stderr}");
        assert!(stderr.contains(needle), "{args:?}: {stderr}");
        assert!(out.stdout.is_empty(), "{args:?} wrote output");
    }
    std::fs::write(dir.join("bad.txt"), "0.1\n0.2\n\n# note\nx\n").unwrap();
    let out = run(&dir, &["pool", "--method", "fisher", "--input", "bad.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5"));
}

#[test]
fn numerical_errors_exit_3() {
    let dir = scratch("numerical");
    let out = run(&dir, &["kappa", "--q", "1e-9", "--m", "2"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
}

#[test]
fn out_file_written_only_on_success() {
    let dir = scratch("outfile");
    let out = run(&dir, &["kappa", "--q", "0.5,1e-9", "--m", "2", "--out", "k.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.join("k.csv").exists());
    let stdout = ok(&dir, &["kappa", "--q", "0.5", "--m", "2", "--out", "k.csv"]);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(dir.join("k.csv")).unwrap();
    assert!(text.starts_with("# poolcore "));
    assert_eq!(rows(&text).len(), 2);
}

#[test]
fn power_is_reproducible_and_sized() {
    let dir = scratch("power");
    let args = [
        "power", "--method", "chi", "--kappa", "0.02,2", "--method", "stouffer", "--eta", "0", "--divergence", "1",
        "--n-sim", "2000", "--seed", "9",
    ];
    let a = ok(&dir, &args);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "1"]);
    let b = ok(&dir, &threaded);
    assert_eq!(a, b);
    let r = rows(&a);
    assert_eq!(r[0], ["eta", "ln_divergence", "ln_w", "method", "kappa_or_w", "power", "se", "n_sim"]);
    assert_eq!(r.len(), 4);
    for row in &r[1..] {
        let power: f64 = row[5].parse().unwrap();
        let se = (0.05f64 * 0.95 / 2000.0).sqrt();
        assert!((power - 0.05).abs() <= 3.0 * se, "{row:?}");
    }
}

#[test]
fn power_marks_unreachable_cells() {
    let dir = scratch("power_absent");
    let out = ok(
        &dir,
        &["power", "--method", "fisher", "--eta", "1", "--divergence", "8", "--ln-w", "-0.01", "--n-sim", "100"],
    );
    let r = rows(&out);
    assert_eq!(r[1][5], "absent");
}

#[test]
fn atlas_writes_counts_and_svg() {
    let dir = scratch("atlas");
    let out = ok(
        &dir,
        &[
            "atlas", "--kappa", "0.01,100", "--eta", "0.1,1", "--divergence", "0,3", "--ln-w", "-3,0", "--n-sim", "200",
            "--svg", "map.svg",
        ],
    );
    let r = rows(&out);
    assert_eq!(r.iter().filter(|row| row[0] == "kappa").count(), 2);
    assert_eq!(r[1], ["eta\\ln_divergence", "0", "3", "row_sum"]);
    let svg = std::fs::read_to_string(dir.join("map.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<title>").count(), 2 * 2 * 2);
}

#[test]
fn sweep_csv_and_summary() {
    let dir = scratch("sweep");
    let values = "0.01,0.2,0.3,0.5,0.9,0.04,0.6,0.7,0.15,0.33";
    let out = ok(&dir, &["sweep", "--values", values, "--no-null"]);
    let r = rows(&out);
    assert_eq!(r[0], ["ln_kappa", "pooled_p"]);
    assert_eq!(r.len(), 66);
    assert!(out.contains("# kappa_min="));
    let out = ok(
        &dir,
        &["sweep", "--values", values, "--grid", "-4:4:9", "--null-n-sim", "1000", "--format", "summary"],
    );
    for key in ["kappa_min=", "p_min=", "null_ref_q05=", "null_ref_q01=", "null_ref_q001=", "null_ref_n_sim=1000"] {
        assert!(out.contains(key), "{key} missing from {out}");
    }
}

/// H4 samples from Beta(0.5, 1) at M = 100: the median κ_min over 100
/// samples lies within one grid step of κ = 2.
#[test]
fn sweep_beta_half_minimum_near_two() {
    let dir = scratch("sweep_h4");
    let vectors = ok(&dir, &["generate", "--m", "100", "--a", "0.5", "--count", "100", "--seed", "11"]);
    let mut ln_kappa_min = Vec::new();
    for line in vectors.lines().filter(|l| !l.starts_with('#')) {
        let out = ok(&dir, &["sweep", "--values", line, "--no-null", "--format", "summary"]);
        let ln_k: f64 = out
            .lines()
            .find_map(|l| l.strip_prefix("ln_kappa_min="))
            .unwrap()
            .parse()
            .unwrap();
        ln_kappa_min.push(ln_k);
    }
    assert_eq!(ln_kappa_min.len(), 100);
    ln_kappa_min.sort_by(f64::total_cmp);
    let median = 0.5 * (ln_kappa_min[49] + ln_kappa_min[50]);
    assert!((median - 2f64.ln()).abs() <= 0.25, "median ln κ_min {median}");
}

#[test]
fn select_returns_smallest_p_values() {
    let dir = scratch("select");
    let vectors = ok(&dir, &["generate", "--m", "100", "--a", "0.5", "--seed", "4"]);
    let line = vectors.lines().find(|l| !l.starts_with('#')).unwrap();
    let p: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
    let out = ok(&dir, &["select", "--values", line, "--kappa", "2", "--eta", "0.05"]);
    let r = rows(&out);
    assert_eq!(r[0], ["rank", "index", "p_value"]);
    assert_eq!(r.len(), 6);
    let mut sorted = p.clone();
    sorted.sort_by(f64::total_cmp);
    for (i, row) in r[1..].iter().enumerate() {
        let idx: usize = row[1].parse().unwrap();
        let v: f64 = row[2].parse().unwrap();
        assert_eq!(p[idx - 1], v);
        assert_eq!(v, sorted[i]);
    }
}

#[test]
fn generate_is_deterministic() {
    let dir = scratch("generate");
    let args = ["generate", "--m", "7", "--eta", "0.5", "--divergence", "1", "--ln-w", "-1", "--count", "4", "--seed", "5"];
    let a = ok(&dir, &args);
    assert_eq!(a, ok(&dir, &args));
    let lines: Vec<&str> = a.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 4);
    for l in lines {
        let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(v.len(), 7);
        assert!(v.iter().all(|x| (0.0..=1.0).contains(x)));
    }
    assert!(a.contains("# n_alt=4"));
    let out = run(&dir, &["generate", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
}
