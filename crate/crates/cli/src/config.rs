//! Line-oriented `key = value` configuration files. Every key mirrors a
//! CLI flag of the same name; values given on the command line win.

use std::collections::HashMap;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "config {} line {}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Parse the value under `key`, if present.
    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key `{key}` = `{raw}`: {e}"))),
        }
    }
}

/// Flag value if given, else config value, else default.
pub fn resolve<T: Copy + std::str::FromStr>(
    flag: Option<T>,
    config: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    Ok(flag.or(config.parse(key)?).unwrap_or(default))
}

/// Flag value if given, else config value; `None` when neither is set.
pub fn resolve_opt<T: Copy + std::str::FromStr>(
    flag: Option<T>,
    config: &ConfigFile,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    Ok(flag.or(config.parse(key)?))
}
