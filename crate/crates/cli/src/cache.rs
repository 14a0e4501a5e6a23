//! Content-addressed result cache: one JSON file per (module, op, target,
//! N, order, zdepth) key, stored with a schema version and a checksum of
//! the payload. Writers stage to a temp file and atomically rename, so
//! concurrent verify-all runs sharing a cache directory never interleave;
//! readers verify the checksum and treat any mismatch as a miss that must
//! be recomputed, never trusted.

use anyhow::{anyhow, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheKey {
    pub module: String,
    pub op: String,
    pub target: u32,
    pub n: usize,
    pub order: usize,
    pub zdepth: i64,
}

#[derive(Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub key: CacheKey,
    pub checksum: u64,
    /// coefficients as "num/den" strings, grouped by named series
    pub payload: Vec<(String, Vec<String>)>,
}

/// FNV-1a over the serialized payload; enough to catch corruption, not a
/// cryptographic commitment.
fn fnv1a(data: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in data {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn payload_bytes(payload: &[(String, Vec<String>)]) -> Vec<u8> {
    let mut buf = Vec::new();
    for (name, coeffs) in payload {
        buf.extend_from_slice(name.as_bytes());
        buf.push(0);
        for c in coeffs {
            buf.extend_from_slice(c.as_bytes());
            buf.push(b';');
        }
        buf.push(b'\n');
    }
    buf
}

pub fn cache_path(dir: &Path, key: &CacheKey) -> PathBuf {
    let name = format!(
        "{}-{}-k{}-N{}-o{}-z{}.json",
        key.module, key.op, key.target, key.n, key.order, key.zdepth
    );
    dir.join(name)
}

pub fn store(dir: &Path, key: &CacheKey, payload: Payload) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let entry = CacheEntry {
        schema_version: SCHEMA_VERSION,
        key: key.clone(),
        checksum: fnv1a(&payload_bytes(&payload)),
        payload,
    };
    let path = cache_path(dir, key);
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp, serde_json::to_vec_pretty(&entry)?)
        .with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

pub type Payload = Vec<(String, Vec<String>)>;

pub fn load(dir: &Path, key: &CacheKey) -> Result<Option<Payload>> {
    let path = cache_path(dir, key);
    if !path.exists() {
        return Ok(None);
    }
    let data = std::fs::read(&path)?;
    let entry: CacheEntry = serde_json::from_slice(&data)
        .map_err(|e| anyhow!("cache schema mismatch at {}: {e}", path.display()))?;
    if entry.schema_version != SCHEMA_VERSION {
        return Err(anyhow!(
            "cache schema version {} != {}",
            entry.schema_version,
            SCHEMA_VERSION
        ));
    }
    if entry.key != *key {
        return Err(anyhow!("cache key mismatch at {}", path.display()));
    }
    if entry.checksum != fnv1a(&payload_bytes(&entry.payload)) {
        return Err(anyhow!("cache checksum failure at {}", path.display()));
    }
    Ok(Some(entry.payload))
}

pub fn default_cache_dir(cli_override: Option<PathBuf>) -> Option<PathBuf> {
    cli_override.or_else(|| std::env::var_os("MSPLAB_CACHE").map(PathBuf::from))
}
