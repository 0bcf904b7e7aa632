//! `key = value` run files.
//!
//! Blank lines and `#` comments are ignored. Keys are the long flag names of
//! the subcommand (`-` and `_` are interchangeable); a flag given on the
//! command line wins over the file.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().replace('_', "-");
            if key.is_empty() {
                return Err(CliError::usage(format!("config line {}: empty key", lineno + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::usage(format!("config line {}: duplicate key '{key}'", lineno + 1)));
            }
        }
        Ok(Self { entries })
    }

    /// Rejects any key outside `allowed`.
    pub fn check_keys(&self, command: &str, allowed: &[&str]) -> Result<(), CliError> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::usage(format!("unknown config key '{k}' for '{command}'"))),
            None => Ok(()),
        }
    }

    pub fn get<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.entries
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::usage(format!("config key '{key}': {e}"))))
            .transpose()
    }

    /// Comma-separated list.
    pub fn get_list<T>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.entries
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().parse::<T>().map_err(|e| CliError::usage(format!("config key '{key}': {e}"))))
                    .collect()
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }
}

/// `flag.or(file)`
pub fn merge<T>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> Result<Option<T>, CliError>
where
    T: FromStr,
    T::Err: Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

pub fn merge_list<T>(flag: Vec<T>, cfg: &ConfigFile, key: &str) -> Result<Vec<T>, CliError>
where
    T: FromStr,
    T::Err: Display,
{
    if !flag.is_empty() {
        return Ok(flag);
    }
    Ok(cfg.get_list(key)?.unwrap_or_default())
}

pub fn require<T>(value: Option<T>, key: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::usage(format!("missing required argument --{key}")))
}
