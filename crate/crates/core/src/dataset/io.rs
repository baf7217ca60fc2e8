//! JSONL shard and manifest persistence.

use super::instance::ProblemInstance;
use super::DatasetError;
use crate::skeleton::Difficulty;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShardInfo {
    pub count: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub generator: String,
    pub engine_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub counts: BTreeMap<String, usize>,
    pub shards: BTreeMap<String, ShardInfo>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes one JSONL shard per difficulty tier plus a manifest carrying
/// per-shard SHA-256 checksums. Returns the manifest.
pub fn write_dataset(
    instances: &[ProblemInstance],
    dir: &Path,
    base_seed: Option<u64>,
    config_hash: Option<String>,
) -> Result<DatasetManifest, DatasetError> {
    fs::create_dir_all(dir)?;
    let mut by_tier: BTreeMap<String, Vec<&ProblemInstance>> = BTreeMap::new();
    for tier in Difficulty::ALL {
        let shard: Vec<&ProblemInstance> = instances
            .iter()
            .filter(|i| i.metadata.difficulty == tier)
            .collect();
        if !shard.is_empty() {
            by_tier.insert(tier.to_string(), shard);
        }
    }

    let mut counts = BTreeMap::new();
    let mut shards = BTreeMap::new();
    for (tier, shard) in &by_tier {
        let name = format!("{tier}.jsonl");
        let mut body = Vec::new();
        for instance in shard {
            serde_json::to_writer(&mut body, instance).map_err(|e| DatasetError::Schema {
                path: name.clone(),
                line: 0,
                message: e.to_string(),
            })?;
            body.push(b'\n');
        }
        let mut file = BufWriter::new(fs::File::create(dir.join(&name))?);
        file.write_all(&body)?;
        file.flush()?;
        counts.insert(tier.clone(), shard.len());
        shards.insert(name, ShardInfo { count: shard.len(), sha256: sha256_hex(&body) });
    }

    let manifest = DatasetManifest {
        generator: super::instance::generator_tag(),
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        base_seed,
        config_hash,
        counts,
        shards,
    };
    let manifest_json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join(MANIFEST_NAME), manifest_json + "\n")?;
    Ok(manifest)
}

/// Reads one JSONL shard, reporting the line number of the first bad row.
pub fn read_shard(path: &Path) -> Result<Vec<ProblemInstance>, DatasetError> {
    let file = fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut instances = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let instance: ProblemInstance =
            serde_json::from_str(&line).map_err(|e| DatasetError::Schema {
                path: path.display().to_string(),
                line: idx + 1,
                message: e.to_string(),
            })?;
        instances.push(instance);
    }
    Ok(instances)
}

/// Reads a dataset from either a single shard file or a directory written by
/// `write_dataset`; directory reads validate the manifest checksums.
pub fn read_dataset(path: &Path) -> Result<Vec<ProblemInstance>, DatasetError> {
    if path.is_file() {
        return read_shard(path);
    }
    let manifest_path = path.join(MANIFEST_NAME);
    let manifest: DatasetManifest = serde_json::from_str(&fs::read_to_string(&manifest_path)?)
        .map_err(|e| DatasetError::Schema {
            path: manifest_path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
    let mut instances = Vec::new();
    for (name, info) in &manifest.shards {
        let shard_path = path.join(name);
        let bytes = fs::read(&shard_path)?;
        if sha256_hex(&bytes) != info.sha256 {
            return Err(DatasetError::ChecksumMismatch(name.clone()));
        }
        let shard = read_shard(&shard_path)?;
        if shard.len() != info.count {
            return Err(DatasetError::Schema {
                path: shard_path.display().to_string(),
                line: 0,
                message: format!("manifest says {} instances, shard has {}", info.count, shard.len()),
            });
        }
        instances.extend(shard);
    }
    Ok(instances)
}
