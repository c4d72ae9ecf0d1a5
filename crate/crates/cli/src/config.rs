//! Optional TOML configuration. The file is named by `--config` or the
//! `MINRANK_CONFIG` environment variable; command-line flags win over it.
//!
//! ```toml
//! sat_solver = "/usr/local/bin/kissat"
//! sat_args = ["-q"]
//! registry = "chordal,bounded:10"
//! c = 2
//! node_limit = 5000000
//! jobs = 4
//! ```

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

pub const CONFIG_ENV: &str = "MINRANK_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub sat_solver: Option<PathBuf>,
    #[serde(default)]
    pub sat_args: Vec<String>,
    pub registry: Option<String>,
    pub c: Option<usize>,
    pub node_limit: Option<u64>,
    pub jobs: Option<usize>,
}

impl Config {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        toml::from_str(text).context("parsing configuration")
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// The explicit path if given, else the environment variable, else
    /// defaults.
    pub fn discover(explicit: Option<&Path>) -> anyhow::Result<Self> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Config::default()),
            },
        }
    }
}
