use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::Failure;

/// Keys accepted in a `--config` file. Every key mirrors the long flag of the
/// same name with `-` written as `_`.
pub const KEYS: &[&str] = &[
    "economy",
    "elasticities",
    "shocks",
    "prefs",
    "panel",
    "input",
    "output_prices",
    "out_dir",
    "threads",
    "format",
    "tol",
    "max_iter",
    "numeraire",
    "method",
    "gamma",
    "kappa",
    "count",
    "sigma",
    "seed",
    "mean",
    "lambda",
    "iv",
    "role",
    "column",
    "alpha",
];

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

/// Flat key-value settings from a TOML file; relative paths resolve against
/// the file's directory.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, Value>,
    base: PathBuf,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let values: BTreeMap<String, Value> = toml::from_str(&text)
            .map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))?;
        if let Some(k) = values.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Failure::Usage(format!("unknown config key `{k}`")));
        }
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(FileConfig { values, base })
    }

    pub fn float(&self, key: &str) -> Result<Option<f64>, Failure> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Float(v)) => Ok(Some(*v)),
            Some(Value::Int(v)) => Ok(Some(*v as f64)),
            Some(_) => Err(Failure::Usage(format!(
                "config key `{key}` must be a number"
            ))),
        }
    }

    pub fn int(&self, key: &str) -> Result<Option<u64>, Failure> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Int(v)) if *v >= 0 => Ok(Some(*v as u64)),
            Some(_) => Err(Failure::Usage(format!(
                "config key `{key}` must be a nonnegative integer"
            ))),
        }
    }

    pub fn text(&self, key: &str) -> Result<Option<String>, Failure> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Text(v)) => Ok(Some(v.clone())),
            Some(_) => Err(Failure::Usage(format!(
                "config key `{key}` must be a string"
            ))),
        }
    }

    pub fn path(&self, key: &str) -> Result<Option<PathBuf>, Failure> {
        Ok(self.text(key)?.map(|p| self.base.join(p)))
    }
}

/// Flag value, else config value, else default.
pub struct Resolver<'a> {
    pub file: &'a FileConfig,
}

impl Resolver<'_> {
    pub fn float(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64, Failure> {
        Ok(match flag {
            Some(v) => v,
            None => self.file.float(key)?.unwrap_or(default),
        })
    }

    pub fn int(&self, flag: Option<u64>, key: &str, default: u64) -> Result<u64, Failure> {
        Ok(match flag {
            Some(v) => v,
            None => self.file.int(key)?.unwrap_or(default),
        })
    }

    pub fn opt_float(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, Failure> {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.file.float(key)?,
        })
    }

    pub fn text(&self, flag: Option<String>, key: &str) -> Result<Option<String>, Failure> {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.file.text(key)?,
        })
    }

    pub fn path(&self, flag: Option<PathBuf>, key: &str) -> Result<Option<PathBuf>, Failure> {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.file.path(key)?,
        })
    }

    pub fn required_path(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf, Failure> {
        self.path(flag, key)?
            .ok_or_else(|| Failure::Usage(format!("missing required --{}", key.replace('_', "-"))))
    }
}
