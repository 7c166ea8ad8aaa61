//! Content-addressed cache of canonical JSON documents.
//!
//! A document is stored under `<kind>-<sha256 of its key>.json`. Writes go to a
//! temporary file in the same directory and are renamed into place, so readers
//! never see a partial file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "CNZN_CACHE_DIR";

pub struct Cache {
    dir: PathBuf,
}

/// Compact serialization with sorted object keys; the basis of every hash.
pub fn canonical(v: &Value) -> String {
    // serde_json's default map is ordered by key.
    serde_json::to_string(v).expect("JSON values always serialize")
}

pub fn content_hash(key: &Value) -> String {
    hex::encode(Sha256::digest(canonical(key).as_bytes()))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The cache named by the environment, if any.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, kind: &str, key: &Value) -> PathBuf {
        self.dir.join(format!("{kind}-{}.json", content_hash(key)))
    }

    /// The stored document, or None when absent or unreadable.
    pub fn get(&self, kind: &str, key: &Value) -> Option<Value> {
        let text = fs::read_to_string(self.path(kind, key)).ok()?;
        let doc: Value = serde_json::from_str(&text).ok()?;
        // A stored document records its own key; reject anything else.
        (doc.get("key") == Some(key)).then(|| doc.get("value").cloned()).flatten()
    }

    pub fn put(&self, kind: &str, key: &Value, value: &Value) -> std::io::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let target = self.path(kind, key);
        let doc = serde_json::json!({ "key": key, "value": value });
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(canonical(&doc).as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&target).map_err(|e| e.error)?;
        Ok(target)
    }
}
