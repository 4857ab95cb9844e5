use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Search bounds shared by the commands. Every field is optional in the
/// file; command-line flags win over the file, the file over the defaults.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub trunc_dim: Option<usize>,
    pub support_bound: Option<usize>,
    pub slack: Option<usize>,
    pub cell_budget: Option<u64>,
    pub max_steps: Option<usize>,
    pub seed: Option<u64>,
}

pub const DEFAULT_N: usize = 1;
pub const DEFAULT_SUPPORT: usize = 2;
pub const DEFAULT_SLACK: usize = 2;
pub const DEFAULT_CELL_BUDGET: u64 = 1_000_000;
pub const DEFAULT_MAX_STEPS: usize = 60;

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    pub fn n(&self, flag: Option<usize>) -> usize {
        flag.or(self.n).unwrap_or(DEFAULT_N)
    }

    /// `D`, defaulting to `n + 3`.
    pub fn trunc_dim(&self, flag: Option<usize>, n: usize) -> usize {
        flag.or(self.trunc_dim).unwrap_or(n + 3)
    }

    /// Checks `D >= n + 3`, needed by the generating-set commands.
    pub fn generating_trunc(&self, flag: Option<usize>, n: usize) -> Result<usize> {
        let d = self.trunc_dim(flag, n);
        if d < n + 3 {
            bail!(ntype::Error::InvalidParameters(format!("trunc_dim {d} is below n + 3 = {}", n + 3)));
        }
        Ok(d)
    }

    pub fn support(&self, flag: Option<usize>) -> usize {
        flag.or(self.support_bound).unwrap_or(DEFAULT_SUPPORT)
    }

    pub fn slack(&self, flag: Option<usize>, default: usize) -> usize {
        flag.or(self.slack).unwrap_or(default)
    }

    pub fn cell_budget(&self, flag: Option<u64>) -> u64 {
        flag.or(self.cell_budget).unwrap_or(DEFAULT_CELL_BUDGET)
    }

    pub fn max_steps(&self, flag: Option<usize>) -> usize {
        flag.or(self.max_steps).unwrap_or(DEFAULT_MAX_STEPS)
    }

    pub fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.seed).unwrap_or(0)
    }
}
