//! Flat `key=value` configuration files for the simulation commands.
//! Flags override file values; file values override defaults.

use std::collections::HashMap;
use std::path::Path;

use crate::{config_error, CliResult};

#[derive(Debug, Default)]
pub struct KeyValues {
    map: HashMap<String, String>,
}

impl KeyValues {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        let mut map = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                config_error(format!(
                    "{}:{}: expected key=value, got '{line}'",
                    path.display(),
                    idx + 1
                ))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(KeyValues { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    /// Parses a whitespace-separated list value.
    pub fn get_list<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<Vec<T>>> {
        match self.get(key) {
            None => Ok(None),
            Some(text) => text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<T>()
                        .map_err(|_| config_error(format!("config key '{key}': bad value '{tok}'")))
                })
                .collect::<CliResult<Vec<T>>>()
                .map(Some),
        }
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(text) => text
                .parse::<T>()
                .map(Some)
                .map_err(|_| config_error(format!("config key '{key}': bad value '{text}'"))),
        }
    }
}
