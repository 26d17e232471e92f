//! Run manifests for result files and the on-disk structure tensor cache.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};
use spinlb_core::{
    build_structure_tensor, enumerate_basis, Sector, StructureTensor, TENSOR_FORMAT_VERSION,
};

/// Provenance block embedded in every result file. All volatile fields live
/// under `timestamps`, so stripping that one subtree makes result files of
/// identical runs byte-comparable.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub cache_paths: Vec<String>,
    pub timestamps: Timestamps,
}

impl RunManifest {
    pub fn new(
        seed: u64,
        config: serde_json::Value,
        cache_paths: Vec<String>,
        timestamps: Timestamps,
    ) -> Self {
        let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
        RunManifest {
            command,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            cache_paths,
            timestamps,
        }
    }
}

/// Wall-clock record, isolated from the reproducible payload.
#[derive(Debug, Serialize)]
pub struct Timestamps {
    pub started: String,
    pub finished: String,
    pub wall_seconds: f64,
    pub stage_wall_seconds: BTreeMap<String, f64>,
}

pub fn now_stamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Micros, true)
}

/// Structure tensors are the dominant build cost and depend only on the
/// cluster size, the serialization format, and the basis ordering, so they
/// are cached on disk keyed by exactly those three.
pub struct TensorCache {
    dir: PathBuf,
    used: Vec<PathBuf>,
}

impl TensorCache {
    pub fn new(dir: PathBuf) -> Self {
        TensorCache {
            dir,
            used: Vec::new(),
        }
    }

    fn slot(&self, n: usize) -> anyhow::Result<PathBuf> {
        let basis = enumerate_basis(n, Sector::ScalarOnly)
            .with_context(|| format!("enumerating the basis for n={n}"))?;
        let mut hasher = Sha256::new();
        for m in &basis {
            hasher.update(m.to_string().as_bytes());
            hasher.update(b";");
        }
        let hex: String = hasher
            .finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect();
        Ok(self
            .dir
            .join(format!("tensor_n{n}_v{TENSOR_FORMAT_VERSION}_{hex}.json")))
    }

    pub fn load_or_build(&mut self, n: usize) -> anyhow::Result<StructureTensor> {
        let path = self.slot(n)?;
        self.used.push(path.clone());
        if let Ok(text) = fs::read_to_string(&path) {
            match StructureTensor::from_json(&text) {
                Ok(tensor) => return Ok(tensor),
                Err(e) => log::warn!("rebuilding stale cache entry {}: {e}", path.display()),
            }
        }
        let tensor = build_structure_tensor(n)
            .with_context(|| format!("building the structure tensor for n={n}"))?;
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating cache directory {}", self.dir.display()))?;
        fs::write(&path, tensor.to_json())
            .with_context(|| format!("writing cache entry {}", path.display()))?;
        Ok(tensor)
    }

    pub fn used_paths(&self) -> Vec<String> {
        self.used.iter().map(|p| p.display().to_string()).collect()
    }
}
