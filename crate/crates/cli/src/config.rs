//! Settings: TOML file, then environment, then command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

pub const CACHE_ENV: &str = "CREPANT_CACHE_DIR";

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub order: Option<i64>,
    pub precision: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub barnes: BarnesConfig,
}

/// Sample points for comparing the Barnes integral with its residue sums.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BarnesConfig {
    /// Inside the disc of convergence of the direct series.
    pub y1_direct: f64,
    /// Outside it, where the left residues converge.
    pub y1_left: f64,
    pub shifts: Vec<i64>,
}

impl Default for BarnesConfig {
    fn default() -> Self {
        BarnesConfig { y1_direct: 0.02, y1_left: 0.05, shifts: vec![0, 1, 2] }
    }
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub order: i64,
    pub precision: u32,
    pub cache_dir: Option<PathBuf>,
    pub barnes: BarnesConfig,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))
    }
}

impl Settings {
    pub fn resolve(
        file: FileConfig,
        order: Option<i64>,
        precision: Option<u32>,
        cache_dir: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let env = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        let cache_dir = cache_dir.or(env).or(file.cache_dir);
        if let Some(d) = &cache_dir {
            if !d.is_dir() {
                return Err(CliError::MissingCacheDir(d.clone()));
            }
        }
        let s = Settings {
            order: order.or(file.order).unwrap_or(8),
            precision: precision.or(file.precision).unwrap_or(30),
            cache_dir,
            barnes: file.barnes,
        };
        if s.order < 1 {
            return Err(CliError::Config("order must be at least 1".into()));
        }
        if s.precision < 16 {
            return Err(CliError::Config("precision must be at least 16 digits".into()));
        }
        Ok(s)
    }
}
