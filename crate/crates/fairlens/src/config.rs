//! Optional TOML run configuration. Every field mirrors a CLI flag; flags
//! take precedence over file values, which take precedence over defaults.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Default, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Master seed for stochastic commands.
    pub seed: Option<u64>,
    /// Worker threads for batch stages (0 = all cores).
    pub workers: Option<usize>,
    #[serde(default)]
    pub saliency: SaliencySection,
    #[serde(default)]
    pub augment: AugmentSection,
    #[serde(default)]
    pub embedding: EmbeddingSection,
    #[serde(default)]
    pub metrics: MetricsSection,
}

#[derive(Debug, Default, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SaliencySection {
    pub radii: Option<Vec<u32>>,
    pub threshold_fraction: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AugmentSection {
    /// `min`, `max`, or `random`.
    pub placement: Option<String>,
    /// `salient`, `nonsalient`, or `both`.
    pub part: Option<String>,
    pub n_ops: Option<usize>,
    pub magnitude: Option<u8>,
}

#[derive(Debug, Default, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSection {
    /// `histogram` or `saliency-histogram`.
    pub kind: Option<String>,
    pub bins: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MetricsSection {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
}
