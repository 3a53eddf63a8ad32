//! On-disk cache of simulated null tables, keyed by (label, M, n_sim, seed).

use std::fs;
use std::path::{Path, PathBuf};

use poolcore::pooling::NullQuantileTable;

use crate::error::{CliError, CliResult};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache { dir: dir.to_path_buf() }
    }

    fn path(&self, label: &str, m: usize, n_sim: usize, seed: u64) -> PathBuf {
        let safe: String = label
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
            .collect();
        self.dir.join(format!("{safe}_M{m}_n{n_sim}_s{seed}.table"))
    }

    /// Returns the cached table for the key, or simulates and stores it. A
    /// cache file that fails to parse or belongs to another key is rebuilt.
    pub fn load_or_build<F>(&self, label: &str, m: usize, n_sim: usize, seed: u64, build: F) -> CliResult<NullQuantileTable>
    where
        F: FnOnce() -> poolcore::Result<NullQuantileTable>,
    {
        let path = self.path(label, m, n_sim, seed);
        if let Ok(text) = fs::read_to_string(&path) {
            match NullQuantileTable::from_text(&text) {
                Ok(t) if t.matches(label, m, n_sim, seed) => return Ok(t),
                _ => eprintln!("cache: {} is stale or damaged, rebuilding", path.display()),
            }
        }
        eprintln!("cache: simulating {label} null table (M = {m}, n_sim = {n_sim}, seed = {seed})");
        let table = build()?;
        fs::create_dir_all(&self.dir)
            .map_err(|e| CliError::Io(format!("creating {}: {e}", self.dir.display())))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, table.to_text())
            .and_then(|_| fs::rename(&tmp, &path))
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        Ok(table)
    }
}
