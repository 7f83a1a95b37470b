use std::collections::BTreeSet;

use crate::clustering::CoreParams;
use crate::type_scoring::{CategoryMap, SieveMatrices};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

/// Thresholds and tables for one pipeline run. All defaults are tunable.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// S3: minimum cosine between a named-entity chain and a common-noun
    /// chain.
    pub t_nn: f64,
    /// S4: minimum cosine between a country's heads and a group's
    /// named-entity modifiers.
    pub t_gr: f64,
    /// S5: maximum average-linkage cosine distance for clustering.
    pub t_cl: f64,
    /// S5: weight of the head word in mention vectors.
    pub k: f64,
    /// S4: core-detection parameters.
    pub core: CoreParams,
    pub matrices: SieveMatrices,
    pub categories: CategoryMap,
    /// Extra lowercased words treated as stopwords when vectorizing.
    pub stopwords: BTreeSet<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            t_nn: 0.5,
            t_gr: 0.5,
            t_cl: 0.4,
            k: 2.0,
            core: CoreParams::default(),
            matrices: SieveMatrices::default(),
            categories: CategoryMap::default(),
            stopwords: BTreeSet::new(),
        }
    }
}

fn check(name: &'static str, value: f64, ok: bool, range: &'static str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::OutOfRange { name, value, range })
    }
}

fn unit(name: &'static str, value: f64) -> Result<(), ConfigError> {
    check(name, value, value > 0.0 && value <= 1.0, "(0, 1]")
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        unit("t_nn", self.t_nn)?;
        unit("t_gr", self.t_gr)?;
        check("t_cl", self.t_cl, self.t_cl > 0.0 && self.t_cl < 2.0, "(0, 2)")?;
        check("k", self.k, self.k > 0.0 && self.k.is_finite(), "(0, inf)")?;
        unit("s_core", self.core.s_core)?;
        unit("d_min", self.core.d_min)?;
        unit("s_assign", self.core.s_assign)?;
        Ok(())
    }
}
