//! Layered configuration: built-in defaults, then the config file, then flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PVLAB_OUT_DIR";
pub const DEFAULT_SEED: u64 = 2024;

/// A parsed TOML config file: top-level keys plus one table per subcommand.
#[derive(Debug, Default)]
pub struct ConfigFile {
    root: Map<String, Value>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let table: toml::Table = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        match serde_json::to_value(table)? {
            Value::Object(root) => Ok(ConfigFile { root }),
            _ => bail!("config root must be a table"),
        }
    }

    fn global(&self, key: &str) -> Option<&Value> {
        self.root.get(key)
    }

    pub fn section(&self, name: &str) -> Result<Map<String, Value>> {
        match self.root.get(name) {
            None => Ok(Map::new()),
            Some(Value::Object(m)) => Ok(m.clone()),
            Some(_) => bail!("config key `{name}` must be a table"),
        }
    }

    pub fn check_keys(&self, commands: &[&str]) -> Result<()> {
        for key in self.root.keys() {
            let known = ["seed", "workers", "out_dir"].contains(&key.as_str()) || commands.contains(&key.as_str());
            if !known {
                bail!("unknown config key `{key}`");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Globals {
    pub seed: u64,
    pub workers: usize,
    pub out_dir: PathBuf,
    pub check: bool,
}

impl Globals {
    pub fn resolve(
        file: &ConfigFile,
        seed: Option<u64>,
        workers: Option<usize>,
        out_dir: Option<PathBuf>,
        check: bool,
    ) -> Result<Self> {
        let seed = match seed {
            Some(s) => s,
            None => match file.global("seed") {
                Some(v) => v.as_u64().context("config `seed` must be a nonnegative integer")?,
                None => DEFAULT_SEED,
            },
        };
        let workers = match workers {
            Some(w) => w,
            None => match file.global("workers") {
                Some(v) => v.as_u64().context("config `workers` must be a nonnegative integer")? as usize,
                None => 0,
            },
        };
        let out_dir = match out_dir {
            Some(d) => d,
            None => match file.global("out_dir") {
                Some(v) => PathBuf::from(v.as_str().context("config `out_dir` must be a string")?),
                None => std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from),
            },
        };
        Ok(Globals {
            seed,
            workers,
            out_dir,
            check,
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

/// Overlays `defaults`, the file section and the set flags, in that order.
pub fn resolve<T: Serialize + DeserializeOwned + Default>(
    section: Map<String, Value>,
    flags: &impl Serialize,
) -> Result<T> {
    let Value::Object(mut merged) = serde_json::to_value(T::default())? else {
        bail!("config defaults must be a table");
    };
    for (k, v) in section {
        let k = k.replace('-', "_");
        if !merged.contains_key(&k) {
            bail!("unknown config key `{k}`");
        }
        merged.insert(k, v);
    }
    if let Value::Object(cli) = serde_json::to_value(flags)? {
        for (k, v) in cli {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).context("invalid configuration value")
}
