use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;
use unipotent_lab::config::Limits;

pub const CONFIG_ENV: &str = "UNIPOTENT_LAB_CONFIG";

/// TOML overrides for [`Limits`]; absent keys keep their defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LimitsFile {
    group_cap: Option<usize>,
    hom_nodes: Option<u64>,
    max_level: Option<usize>,
    max_word_length: Option<u64>,
    exhaustive_check: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    limits: LimitsFile,
}

fn parse(text: &str, path: &Path) -> Result<Limits> {
    let file: ConfigFile = toml::from_str(text).with_context(|| format!("invalid config {}", path.display()))?;
    let d = Limits::default();
    let l = file.limits;
    Ok(Limits {
        group_cap: l.group_cap.unwrap_or(d.group_cap),
        hom_nodes: l.hom_nodes.unwrap_or(d.hom_nodes),
        max_level: l.max_level.unwrap_or(d.max_level),
        max_word_length: l.max_word_length.unwrap_or(d.max_word_length),
        exhaustive_check: l.exhaustive_check.unwrap_or(d.exhaustive_check),
    })
}

/// Limits from `--config`, else from the environment variable, else defaults.
pub fn load(flag: Option<&Path>) -> Result<Limits> {
    let path = match flag {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
    };
    match path {
        None => Ok(Limits::default()),
        Some(p) => {
            let text = std::fs::read_to_string(&p).with_context(|| format!("cannot read config {}", p.display()))?;
            parse(&text, &p)
        }
    }
}
