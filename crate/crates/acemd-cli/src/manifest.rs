//! Run manifests: enough provenance to reproduce any output directory.
//!
//! A manifest records the exact command line, input content digests, the
//! seed, and the full effective configuration. Re-running the same command
//! on inputs with the same digests reproduces every data file byte for byte;
//! only `created_utc` varies between runs.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::output::write_json;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// Full argv of the invocation.
    pub command: Vec<String>,
    pub version: String,
    pub library_version: String,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    /// Effective configuration after defaults and derivations.
    pub config: serde_json::Value,
    /// Wall-clock timestamp; informational only, excluded from any
    /// reproducibility comparison.
    pub created_utc: String,
}

impl RunManifest {
    pub fn new(
        argv: &[String],
        seed: u64,
        inputs: Vec<InputDigest>,
        config: serde_json::Value,
    ) -> Self {
        Self {
            command: argv.to_vec(),
            version: env!("CARGO_PKG_VERSION").into(),
            library_version: acemd::VERSION.into(),
            seed,
            inputs,
            config,
            created_utc: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn write(&self, out_dir: &Path) -> Result<()> {
        write_json(&out_dir.join("manifest.json"), self)
    }
}

/// SHA-256 digest of a file's raw bytes.
pub fn digest_file(path: &Path) -> Result<InputDigest> {
    let bytes = std::fs::read(path)?;
    let hash = Sha256::digest(&bytes);
    let sha256 = hash.iter().map(|b| format!("{b:02x}")).collect();
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256,
    })
}
