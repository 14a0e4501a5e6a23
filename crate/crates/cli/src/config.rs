//! Optional key=value configuration file overriding command defaults.
//! Recognized keys: k, N, order, zdepth, format, cache_dir. Lines starting
//! with '#' are comments.

use anyhow::{anyhow, Result};
use std::path::{Path, PathBuf};

#[derive(Default)]
pub struct FileConfig {
    pub k: Option<u32>,
    pub n: Option<usize>,
    pub order: Option<usize>,
    pub zdepth: Option<i64>,
    pub format: Option<super::Format>,
    pub cache_dir: Option<PathBuf>,
}

pub fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = FileConfig::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key=value", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "k" => cfg.k = Some(value.parse()?),
            "N" => cfg.n = Some(value.parse()?),
            "order" => cfg.order = Some(value.parse()?),
            "zdepth" => cfg.zdepth = Some(value.parse()?),
            "format" => {
                cfg.format = Some(match value {
                    "json" => super::Format::Json,
                    "csv" => super::Format::Csv,
                    "text" => super::Format::Text,
                    other => return Err(anyhow!("unknown format {other}")),
                })
            }
            "cache_dir" => cfg.cache_dir = Some(PathBuf::from(value)),
            other => return Err(anyhow!("unknown key {other}")),
        }
    }
    Ok(cfg)
}
