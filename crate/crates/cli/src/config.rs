//! Config-file support and the persisted effective-config snapshot.
//!
//! One TOML document holds per-command sections; command-line flags override
//! file values, which override built-in defaults.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub global: GlobalSection,
    #[serde(default)]
    pub generate: GenerateSection,
    #[serde(default)]
    pub eval: EvalSection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalSection {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub offline: Option<bool>,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    pub api_key_env: Option<String>,
    pub workers: Option<usize>,
    pub log_level: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateSection {
    pub mode: Option<String>,
    pub count: Option<usize>,
    pub n1_max: Option<u32>,
    pub n2_max: Option<u32>,
    pub backward_ratio: Option<f64>,
    pub depth_min: Option<u32>,
    pub depth_max: Option<u32>,
    pub resample_limit: Option<u32>,
    pub uncertain_ratio: Option<f64>,
    pub exists_ratio: Option<f64>,
    pub names: Option<PathBuf>,
    pub keywords: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSection {
    pub model: Option<String>,
    pub strategy: Option<String>,
    pub shots: Option<usize>,
    pub seed: Option<u64>,
    pub report: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", p.display()))?;
                toml::from_str(&text)
                    .map_err(|e| anyhow::anyhow!("bad config {}: {e}", p.display()))
            }
        }
    }
}

/// The fully resolved configuration of a generate run; persisted next to the
/// outputs so the run can be reproduced byte for byte.
#[derive(Clone, Debug, Serialize)]
pub struct GenerateSnapshot {
    pub mode: String,
    pub count: usize,
    pub seed: u64,
    pub offline: bool,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    pub n1_max: u32,
    pub n2_max: u32,
    pub backward_ratio: f64,
    pub depth_min: Option<u32>,
    pub depth_max: Option<u32>,
    pub resample_limit: u32,
    pub uncertain_ratio: f64,
    pub exists_ratio: f64,
    pub workers: usize,
    pub names: Option<PathBuf>,
    pub keywords: Option<PathBuf>,
    pub generator: String,
}

impl GenerateSnapshot {
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("snapshot serializes")
    }

    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(self.to_toml().as_bytes());
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}
