//! Optional TOML configuration overriding the default resource caps.
//!
//! Looked up at `$CFERMAT_CONFIG`, then `$XDG_CONFIG_HOME/cfermat/config.toml`,
//! then `~/.config/cfermat/config.toml`. A missing file is not an error.
//!
//! ```toml
//! enumeration_cap = 1000000
//! oracle_cap = 100000000
//! hilbert_max_height = 6
//! hilbert_max_subsets = 200000
//! ```

use std::path::{Path, PathBuf};

use cfermat_core::Limits;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub enumeration_cap: Option<u64>,
    pub oracle_cap: Option<u64>,
    pub hilbert_max_height: Option<u32>,
    pub hilbert_max_subsets: Option<u64>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    /// The explicit path if given, else the first conventional location that
    /// exists.
    pub fn discover(explicit: Option<&Path>) -> Result<Config, CliError> {
        if let Some(p) = explicit {
            return Config::load(p);
        }
        match default_path() {
            Some(p) if p.is_file() => Config::load(&p),
            _ => Ok(Config::default()),
        }
    }

    pub fn apply(&self, limits: &mut Limits) {
        if let Some(v) = self.enumeration_cap {
            limits.enumeration_cap = v;
        }
        if let Some(v) = self.oracle_cap {
            limits.oracle_cap = v;
        }
        if let Some(v) = self.hilbert_max_height {
            limits.hilbert_max_height = v;
        }
        if let Some(v) = self.hilbert_max_subsets {
            limits.hilbert_max_subsets = v;
        }
    }
}

fn default_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("CFERMAT_CONFIG") {
        return Some(PathBuf::from(p));
    }
    if let Some(xdg) = std::env::var_os("XDG_CONFIG_HOME") {
        return Some(PathBuf::from(xdg).join("cfermat/config.toml"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".config/cfermat/config.toml"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_only_given_keys() {
        let cfg = Config::parse("oracle_cap = 50\n").unwrap();
        let mut limits = Limits::default();
        cfg.apply(&mut limits);
        assert_eq!(limits.oracle_cap, 50);
        assert_eq!(limits.enumeration_cap, Limits::default().enumeration_cap);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Config::parse("oracle_capp = 1").is_err());
    }
}
