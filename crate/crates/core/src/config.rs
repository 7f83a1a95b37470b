//! JSON run configuration. Every field is optional:
//!
//! ```json
//! {
//!   "t_nn": 0.5, "t_gr": 0.5, "t_cl": 0.4, "k": 2.0,
//!   "s_core": 0.6, "d_min": 0.3, "s_assign": 0.5,
//!   "matrices": { "cm3": "matrices/cm3.txt" },
//!   "categories": "categories.txt",
//!   "stopwords": ["said"],
//!   "aggregate": "pooled",
//!   "oov_seed": 0,
//!   "vector_limit": null
//! }
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clustering::CoreParams;
use crate::sieves::{ConfigError, PipelineConfig};
use crate::type_scoring::{CategoryMap, ComparisonMatrix, SieveMatrices, TypeError};

/// Environment variable consulted when no `--config` flag is given.
pub const CONFIG_ENV: &str = "XCOREF_CONFIG";

#[derive(Debug, thiserror::Error)]
pub enum ConfigFileError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Table { path: PathBuf, source: TypeError },
    #[error(transparent)]
    Range(#[from] ConfigError),
}

/// How per-topic scores are combined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    /// One evaluation over the chains of all topics.
    #[default]
    Pooled,
    /// Unweighted mean of per-topic scores.
    Macro,
}

impl FromStr for Aggregate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pooled" => Ok(Aggregate::Pooled),
            "macro" => Ok(Aggregate::Macro),
            other => Err(format!("unknown aggregation {other:?}, expected pooled or macro")),
        }
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregate::Pooled => "pooled",
            Aggregate::Macro => "macro",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixPaths {
    pub cm1: Option<PathBuf>,
    pub cm2: Option<PathBuf>,
    pub cm3: Option<PathBuf>,
    pub cm4: Option<PathBuf>,
    pub cm5: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub t_nn: f64,
    pub t_gr: f64,
    pub t_cl: f64,
    pub k: f64,
    pub s_core: f64,
    pub d_min: f64,
    pub s_assign: f64,
    pub matrices: MatrixPaths,
    pub categories: Option<PathBuf>,
    pub stopwords: Vec<String>,
    pub aggregate: Aggregate,
    pub oov_seed: u64,
    pub vector_limit: Option<usize>,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let p = PipelineConfig::default();
        ConfigFile {
            t_nn: p.t_nn,
            t_gr: p.t_gr,
            t_cl: p.t_cl,
            k: p.k,
            s_core: p.core.s_core,
            d_min: p.core.d_min,
            s_assign: p.core.s_assign,
            matrices: MatrixPaths::default(),
            categories: None,
            stopwords: Vec::new(),
            aggregate: Aggregate::default(),
            oov_seed: 0,
            vector_limit: None,
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigFileError> {
        let mut cfg: ConfigFile = serde_json::from_str(text).map_err(|source| ConfigFileError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(rel) = p.as_ref().filter(|p| p.is_relative()) {
                *p = Some(base.join(rel));
            }
        };
        rebase(&mut cfg.categories);
        rebase(&mut cfg.matrices.cm1);
        rebase(&mut cfg.matrices.cm2);
        rebase(&mut cfg.matrices.cm3);
        rebase(&mut cfg.matrices.cm4);
        rebase(&mut cfg.matrices.cm5);
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigFileError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigFileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    /// Loads the referenced tables and checks ranges.
    pub fn pipeline_config(&self) -> Result<PipelineConfig, ConfigFileError> {
        let table = |path: &Path, source| ConfigFileError::Table {
            path: path.to_path_buf(),
            source,
        };
        let mut matrices = SieveMatrices::default();
        let paths = [
            &self.matrices.cm1,
            &self.matrices.cm2,
            &self.matrices.cm3,
            &self.matrices.cm4,
            &self.matrices.cm5,
        ];
        for (i, path) in paths.into_iter().enumerate() {
            if let Some(path) = path {
                let sieve = i as u8 + 1;
                matrices.set(sieve, ComparisonMatrix::load(sieve, path).map_err(|e| table(path, e))?);
            }
        }
        let categories = match &self.categories {
            Some(path) => CategoryMap::load(path).map_err(|e| table(path, e))?,
            None => CategoryMap::default(),
        };
        let config = PipelineConfig {
            t_nn: self.t_nn,
            t_gr: self.t_gr,
            t_cl: self.t_cl,
            k: self.k,
            core: CoreParams {
                s_core: self.s_core,
                d_min: self.d_min,
                s_assign: self.s_assign,
            },
            matrices,
            categories,
            stopwords: self.stopwords.iter().map(|s| s.to_lowercase()).collect(),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Config from the explicit path, else from [`CONFIG_ENV`], else defaults.
pub fn resolve_config(explicit: Option<&Path>) -> Result<ConfigFile, ConfigFileError> {
    match explicit {
        Some(p) => ConfigFile::load(p),
        None => match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => ConfigFile::load(PathBuf::from(p)),
            _ => Ok(ConfigFile::default()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let cfg = ConfigFile::parse("{}", Path::new("c.json")).unwrap();
        assert_eq!(cfg, ConfigFile::default());
        let p = cfg.pipeline_config().unwrap();
        assert_eq!(p.t_cl, 0.4);
        assert_eq!(p.k, 2.0);
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(matches!(
            ConfigFile::parse(r#"{"t_xx": 1}"#, Path::new("c.json")),
            Err(ConfigFileError::Parse { .. })
        ));
    }

    #[test]
    fn relative_paths_rebased() {
        let cfg = ConfigFile::parse(
            r#"{"matrices": {"cm2": "m/cm2.txt"}, "aggregate": "macro"}"#,
            Path::new("/etc/x/c.json"),
        )
        .unwrap();
        assert_eq!(cfg.matrices.cm2.as_deref(), Some(Path::new("/etc/x/m/cm2.txt")));
        assert_eq!(cfg.aggregate, Aggregate::Macro);
    }

    #[test]
    fn range_checked() {
        let cfg = ConfigFile::parse(r#"{"t_nn": 1.5}"#, Path::new("c.json")).unwrap();
        assert!(matches!(cfg.pipeline_config(), Err(ConfigFileError::Range(_))));
    }
}
