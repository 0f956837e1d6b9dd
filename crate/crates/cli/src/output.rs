use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance stamped into every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_sha256: String,
    pub seed: u64,
}

impl Meta {
    pub fn new<C: Serialize>(command: &'static str, config: &C, seed: u64) -> Result<Self> {
        let canonical = serde_json::to_vec(config)?;
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update([0]);
        h.update(&canonical);
        Ok(Meta { tool: "lil", version: env!("CARGO_PKG_VERSION"), command, config_sha256: hex::encode(h.finalize()), seed })
    }

    /// Leading comment line for CSV artifacts.
    pub fn csv_comment(&self) -> String {
        format!("# {} {} command={} config_sha256={} seed={}\n", self.tool, self.version, self.command, self.config_sha256, self.seed)
    }
}

/// Writes `bytes` to `dir/name` via a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&target).with_context(|| format!("renaming into {}", target.display()))?;
    Ok(target)
}

/// Pretty JSON with a trailing newline.
pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Serialize)]
pub struct Artifact<'a, C, R> {
    pub meta: &'a Meta,
    pub config: &'a C,
    #[serde(flatten)]
    pub result: R,
}
