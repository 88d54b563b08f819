//! Resolution of run settings: flag, then config file, then defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qmetro::DenseCap;

use crate::args::{Common, Format};
use crate::error::CliError;

pub const DENSE_CAP_ENV: &str = "QMETRO_DENSE_CAP";

const KNOWN_KEYS: &[&str] = &[
    "seed", "format", "out", "dense-cap", "family", "p", "l", "n", "state", "method", "nu", "restarts", "k",
    "against", "random-pairs", "eps1", "eps2", "n-grid", "fit-min-n", "p-step",
];

/// `key = value` lines; `#` starts a comment. Keys are the long flag names.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
            let key = k.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", i + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

pub struct Settings {
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub cap: DenseCap,
    config: ConfigFile,
}

impl Settings {
    pub fn resolve(common: &Common, default_format: Format) -> Result<Self, CliError> {
        let config = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let seed = pick(common.seed, &config, "seed")?.unwrap_or(0);
        let format = match common.format {
            Some(f) => f,
            None => match config.raw("format") {
                Some(s) => Format::parse(s).ok_or_else(|| CliError::Usage(format!("format '{s}' is not csv or json")))?,
                None => default_format,
            },
        };
        let out = common.out.clone().or_else(|| config.raw("out").map(PathBuf::from));
        let max_dim = match pick(common.dense_cap, &config, "dense-cap")? {
            Some(d) => d,
            None => match std::env::var(DENSE_CAP_ENV) {
                Ok(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("{DENSE_CAP_ENV}='{s}' is not a dimension")))?,
                Err(_) => DenseCap::DEFAULT_MAX_DIM,
            },
        };
        if max_dim == 0 {
            return Err(CliError::Usage("dense cap must be positive".into()));
        }
        Ok(Self { seed, format, out, cap: DenseCap::new(max_dim), config })
    }

    /// The flag if given, else the config value, else `None`.
    pub fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        pick(flag, &self.config, key)
    }

    pub fn path(&self, flag: &Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.clone().or_else(|| self.config.raw(key).map(PathBuf::from))
    }
}

fn pick<T: FromStr>(flag: Option<T>, config: &ConfigFile, key: &str) -> Result<Option<T>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match config.raw(key) {
        Some(s) => s.parse().map(Some).map_err(|_| CliError::Usage(format!("config value {key}='{s}' is invalid"))),
        None => Ok(None),
    }
}

/// Comma-separated positive integers.
pub fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("'{t}' in list '{s}' is not a size"))))
        .collect()
}
