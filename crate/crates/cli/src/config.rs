//! Flat `key = value` run configuration.
//!
//! Keys are the long flag names without dashes (`n-paths`, `T`, ...). Blank
//! lines and lines starting with `#` are ignored. Command-line flags win over
//! the file; the file wins over built-in defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use parisian_ruin::montecarlo::{Monitoring, Sampler};
use parisian_ruin::pickands::Estimator;

use crate::error::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "u",
    "c",
    "sigma",
    "delta",
    "T",
    "eps",
    "t-max",
    "h",
    "n-steps",
    "n-paths",
    "seed",
    "sampler",
    "monitoring",
    "conf-level",
    "out",
    "workers",
    "a",
    "b",
    "lambda",
    "lambda-max",
    "tol",
    "t-step",
    "n-grid-s",
    "n-reps",
    "estimator",
    "extrapolate",
    "u-values",
    "x-values",
];

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
    source: String,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("{source}:{}: expected key=value", n + 1)));
            };
            let (k, v) = (k.trim(), v.trim());
            if !KNOWN_KEYS.contains(&k) {
                return Err(CliError::Usage(format!("{source}:{}: unknown key `{k}`", n + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::Usage(format!("{source}:{}: duplicate key `{k}`", n + 1)));
            }
        }
        Ok(Self {
            entries,
            source: source.to_string(),
        })
    }

    fn get<T: Setting>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.entries
            .get(key)
            .map(|v| T::parse_setting(v).map_err(|e| CliError::Usage(format!("{}: `{key}`: {e}", self.source))))
            .transpose()
    }
}

/// A value that can come from a flag or from the config file.
pub trait Setting: Sized {
    fn parse_setting(s: &str) -> Result<Self, String>;
}

macro_rules! from_str_setting {
    ($($t:ty),*) => {$(
        impl Setting for $t {
            fn parse_setting(s: &str) -> Result<Self, String> {
                <$t>::from_str(s.trim()).map_err(|e| format!("cannot parse `{s}`: {e}"))
            }
        }
    )*};
}

from_str_setting!(f64, usize, u64, bool, PathBuf);

impl Setting for Vec<f64> {
    fn parse_setting(s: &str) -> Result<Self, String> {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(f64::parse_setting)
            .collect::<Result<Vec<_>, _>>()
            .and_then(|v| if v.is_empty() { Err("empty list".into()) } else { Ok(v) })
    }
}

impl Setting for Sampler {
    fn parse_setting(s: &str) -> Result<Self, String> {
        match s.trim() {
            "plain" => Ok(Sampler::Plain),
            "mean-shift" => Ok(Sampler::MeanShift),
            o => Err(format!("unknown sampler `{o}` (plain, mean-shift)")),
        }
    }
}

impl Setting for Monitoring {
    fn parse_setting(s: &str) -> Result<Self, String> {
        match s.trim() {
            "grid" => Ok(Monitoring::Grid),
            "bridge" => Ok(Monitoring::Bridge),
            o => Err(format!("unknown monitoring `{o}` (grid, bridge)")),
        }
    }
}

impl Setting for Estimator {
    fn parse_setting(s: &str) -> Result<Self, String> {
        match s.trim() {
            "direct" => Ok(Estimator::Direct),
            "tilted" => Ok(Estimator::Tilted),
            o => Err(format!("unknown estimator `{o}` (direct, tilted)")),
        }
    }
}

/// clap value parser for any [`Setting`].
pub fn parse_flag<T: Setting>(s: &str) -> Result<T, String> {
    T::parse_setting(s)
}

/// Layers flags over an optional config file.
pub struct Resolver {
    file: ConfigFile,
}

impl Resolver {
    pub fn new(file: Option<ConfigFile>) -> Self {
        Self {
            file: file.unwrap_or_default(),
        }
    }

    pub fn opt<T: Setting>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.get(key),
        }
    }

    pub fn or<T: Setting>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }

    pub fn required<T: Setting>(&self, flag: Option<T>, key: &str) -> Result<T, CliError> {
        self.opt(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("missing required setting `{key}`")))
    }

    /// Flag, then file, then `RUIN_SEED`, then `1`.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        if let Some(s) = self.opt(flag, "seed")? {
            return Ok(s);
        }
        match std::env::var("RUIN_SEED") {
            Ok(v) => u64::parse_setting(&v).map_err(|e| CliError::Usage(format!("RUIN_SEED: {e}"))),
            Err(_) => Ok(1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let f = ConfigFile::parse("# run\nu = 2\n\nn-paths=500\nsampler = mean-shift\n", "t").unwrap();
        assert_eq!(f.get::<f64>("u").unwrap(), Some(2.0));
        assert_eq!(f.get::<usize>("n-paths").unwrap(), Some(500));
        assert_eq!(f.get::<Sampler>("sampler").unwrap(), Some(Sampler::MeanShift));
        assert_eq!(f.get::<f64>("c").unwrap(), None);
        assert!(ConfigFile::parse("colour = red\n", "t").is_err());
        assert!(ConfigFile::parse("u 2\n", "t").is_err());
        assert!(ConfigFile::parse("u=1\nu=2\n", "t").is_err());
        let bad = ConfigFile::parse("u = two\n", "t").unwrap();
        assert!(bad.get::<f64>("u").is_err());
    }

    #[test]
    fn flags_override_file() {
        let r = Resolver::new(Some(ConfigFile::parse("u = 2\nc = 3\n", "t").unwrap()));
        assert_eq!(r.or(Some(5.0), "u", 0.0).unwrap(), 5.0);
        assert_eq!(r.or(None, "c", 0.0).unwrap(), 3.0);
        assert_eq!(r.or(None, "sigma", 1.5).unwrap(), 1.5);
        assert!(r.required::<f64>(None, "delta").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(Vec::<f64>::parse_setting("4, 6,8").unwrap(), vec![4.0, 6.0, 8.0]);
        assert!(Vec::<f64>::parse_setting(" , ").is_err());
    }
}
