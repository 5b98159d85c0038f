//! Run configuration: defaults, an optional `key=value` file, then flags.

use std::fs;
use std::path::Path;

use circulant_ci::cayley::DEFAULT_ORACLE_CUTOFF;
use circulant_ci::engine::DEFAULT_SOLVING_SET_CACHE_LIMIT;
use circulant_ci::EngineConfig;
use clap::ValueEnum;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub oracle_cutoff: u64,
    pub solving_set_cache_limit: usize,
    pub workers: usize,
    pub output_format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            oracle_cutoff: DEFAULT_ORACLE_CUTOFF,
            solving_set_cache_limit: DEFAULT_SOLVING_SET_CACHE_LIMIT,
            workers: 1,
            output_format: Format::Json,
            seed: DEFAULT_SEED,
        }
    }
}

/// Values given on the command line (or through `CIRC_WORKERS`); each one
/// overrides the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub oracle_cutoff: Option<u64>,
    pub solving_set_cache_limit: Option<usize>,
    pub workers: Option<usize>,
    pub output_format: Option<Format>,
    pub seed: Option<u64>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("config line {line}: invalid value {value:?} for {key}"))
}

impl RunConfig {
    /// Applies `key=value` lines on top of `self`. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn apply_file_text(mut self, text: &str) -> Result<Self, String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "oracle_cutoff" => self.oracle_cutoff = parse_value(key, value, i + 1)?,
                "solving_set_cache_limit" => self.solving_set_cache_limit = parse_value(key, value, i + 1)?,
                "workers" => self.workers = parse_value(key, value, i + 1)?,
                "seed" => self.seed = parse_value(key, value, i + 1)?,
                "output_format" => {
                    self.output_format = Format::from_str(value, true)
                        .map_err(|_| format!("config line {}: unknown output_format {value:?}", i + 1))?
                }
                other => return Err(format!("config line {}: unknown key {other:?}", i + 1)),
            }
        }
        Ok(self)
    }

    pub fn resolve(file: Option<&Path>, overrides: &Overrides) -> Result<Self, String> {
        let mut config = RunConfig::default();
        if let Some(path) = file {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            config = config.apply_file_text(&text)?;
        }
        if let Some(v) = overrides.oracle_cutoff {
            config.oracle_cutoff = v;
        }
        if let Some(v) = overrides.solving_set_cache_limit {
            config.solving_set_cache_limit = v;
        }
        if let Some(v) = overrides.workers {
            config.workers = v;
        }
        if let Some(v) = overrides.output_format {
            config.output_format = v;
        }
        if let Some(v) = overrides.seed {
            config.seed = v;
        }
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), String> {
        if self.oracle_cutoff < 2 {
            return Err(format!(
                "oracle_cutoff must be at least 2, got {}",
                self.oracle_cutoff
            ));
        }
        if self.workers < 1 {
            return Err("workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            oracle_cutoff: self.oracle_cutoff,
            solving_set_cache_limit: self.solving_set_cache_limit,
            workers: self.workers,
        }
    }
}
