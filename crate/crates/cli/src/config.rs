//! Optional TOML defaults. Keys mirror the long flag names with `_` for `-`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::args::{Quartiles, Tail};
use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub scores: Option<PathBuf>,
    pub codes: Option<String>,
    pub meta: Option<String>,
    pub missing_policy: Option<String>,
    pub metric: Option<String>,
    pub metrics: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub subset_size: Option<usize>,
    pub distinct: Option<bool>,
    pub quartiles: Option<Quartiles>,
    pub out_dir: Option<PathBuf>,
    pub svg: Option<bool>,
    pub subsets: Option<Vec<String>>,
    pub reference: Option<String>,
    pub compared: Option<String>,
    pub parser: Option<String>,
    pub tags: Option<Vec<String>>,
    pub k: Option<usize>,
    pub tail: Option<Tail>,
    pub n: Option<usize>,
    pub reference_parser: Option<String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Parse a string-valued key with the same rules as the flag.
    pub fn parsed<T: FromStr>(&self, key: &str, value: &Option<String>) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        value
            .as_deref()
            .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("config key `{key}`: {e}"))))
            .transpose()
    }
}

/// Flag, then config, then default.
pub fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

/// Like [`pick`] for values without a default.
pub fn require<T>(flag: Option<T>, config: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(config).ok_or_else(|| CliError::Usage(format!("--{name} is required")))
}
