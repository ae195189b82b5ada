//! Plain-text `key=value` configuration with command-line override.
//!
//! Precedence: explicit flag > config file > environment > built-in default.
//! `WZB_OUTPUT_DIR` names the output directory; everything else comes from
//! the file or the flags. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) => {
                    values.insert(k.trim().to_string(), v.trim().to_string());
                }
                None => {
                    return Err(format!(
                        "{}:{}: expected key=value, got `{line}`",
                        path.display(),
                        lineno + 1
                    ))
                }
            }
        }
        Ok(FileConfig { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| format!("config key `{key}`: cannot parse `{v}`")),
        }
    }
}

/// Effective output directory: flag, then config, then `WZB_OUTPUT_DIR`,
/// then the working directory.
pub fn output_dir(flag: Option<&Path>, config: &FileConfig) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = config.get("output_dir") {
        return PathBuf::from(p);
    }
    if let Ok(p) = std::env::var("WZB_OUTPUT_DIR") {
        return PathBuf::from(p);
    }
    PathBuf::from(".")
}
