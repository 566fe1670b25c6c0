//! On-disk result cache. Entries are content-addressed by the hash of
//! their request key; each file records the key, a checksum of the
//! payload, and the run's verification verdict. Anything unreadable,
//! mismatched, or truncated is treated as a miss and overwritten on the
//! next store.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    schema: u32,
    key: String,
    sha256: String,
    /// Whether the run's mathematical checks (if any) passed.
    ok: bool,
    payload: String,
}

fn digest(data: &str) -> String {
    hex::encode(Sha256::digest(data.as_bytes()))
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{}.json", digest(key)))
}

/// Fetch a cached payload and its verdict, verifying key and checksum.
/// Any defect is a miss.
pub fn lookup(dir: &Path, key: &str) -> Option<(String, bool)> {
    let raw = fs::read_to_string(entry_path(dir, key)).ok()?;
    let entry: CacheEntry = serde_json::from_str(&raw).ok()?;
    if entry.schema != 1 || entry.key != key || digest(&entry.payload) != entry.sha256 {
        return None;
    }
    Some((entry.payload, entry.ok))
}

/// Store a payload and verdict under a key, creating the directory if
/// needed.
pub fn store(dir: &Path, key: &str, payload: &str, ok: bool) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let entry = CacheEntry {
        schema: 1,
        key: key.to_string(),
        sha256: digest(payload),
        ok,
        payload: payload.to_string(),
    };
    fs::write(
        entry_path(dir, key),
        serde_json::to_string(&entry).expect("cache entries are plain data"),
    )
}
