//! Write-once JSON cache of computed tables and series.
//!
//! Each entry is one file holding an envelope with the schema version, the
//! key, the SHA-256 of the canonical payload text and the payload itself.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "CUE_GENUS_CACHE";
pub const CACHE_SCHEMA: &str = "cue-genus/cache/v1";
const DEFAULT_DIR: &str = ".cue-genus-cache";

/// What is stored: a family block for truncation `degree`, `genera`
/// genera and optionally a matrix size `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CacheKey {
    pub family: String,
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genera: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
}

impl CacheKey {
    pub fn table(family: &str, degree: usize, genera: usize) -> Self {
        Self { family: family.into(), degree, genera: Some(genera), n: None }
    }

    pub fn series(family: &str, n: u32, degree: usize) -> Self {
        Self { family: family.into(), degree, genera: None, n: Some(n) }
    }

    pub fn file_name(&self) -> String {
        let mut name = format!("{}-D{}", self.family, self.degree);
        if let Some(g) = self.genera {
            name.push_str(&format!("-G{g}"));
        }
        if let Some(n) = self.n {
            name.push_str(&format!("-N{n}"));
        }
        name + ".json"
    }
}

impl fmt::Display for CacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_name().trim_end_matches(".json"))
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    schema: String,
    key: CacheKey,
    sha256: String,
    payload: serde_json::Value,
}

fn digest(payload: &serde_json::Value) -> String {
    let text = serde_json::to_string(payload).expect("serializable");
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// State of one file found by [`DiskCache::inspect`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryInfo {
    pub file: String,
    pub bytes: u64,
    pub key: Option<CacheKey>,
    /// `None` when the entry verifies.
    pub problem: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GcReport {
    pub kept: usize,
    pub removed: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    root: PathBuf,
}

impl DiskCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    /// `$CUE_GENUS_CACHE` if set, otherwise `.cue-genus-cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_DIR.into()))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.root.join(key.file_name())
    }

    fn read_envelope(path: &Path) -> Result<Envelope> {
        let integrity = |reason: String| Error::CacheIntegrity { path: path.to_path_buf(), reason };
        let text = fs::read_to_string(path)?;
        let env: Envelope = serde_json::from_str(&text).map_err(|e| integrity(format!("unreadable entry: {e}")))?;
        if env.schema != CACHE_SCHEMA {
            return Err(integrity(format!("schema {} (expected {CACHE_SCHEMA})", env.schema)));
        }
        let actual = digest(&env.payload);
        if actual != env.sha256 {
            return Err(integrity(format!("payload hash {actual} does not match recorded {}", env.sha256)));
        }
        Ok(env)
    }

    /// Returns the payload stored under `key`, if any. Damaged entries are
    /// errors, never misses.
    pub fn get(&self, key: &CacheKey) -> Result<Option<serde_json::Value>> {
        let path = self.path_for(key);
        if !path.exists() {
            return Ok(None);
        }
        let env = Self::read_envelope(&path)?;
        if &env.key != key {
            return Err(Error::CacheIntegrity { path, reason: format!("entry holds {} instead of {key}", env.key) });
        }
        Ok(Some(env.payload))
    }

    /// Stores `payload` under `key`. A second write must carry the same
    /// payload as the first.
    pub fn put(&self, key: &CacheKey, payload: &serde_json::Value) -> Result<()> {
        if let Some(existing) = self.get(key)? {
            if &existing != payload {
                return Err(Error::CacheIntegrity {
                    path: self.path_for(key),
                    reason: "a different value is already stored under this key".into(),
                });
            }
            return Ok(());
        }
        fs::create_dir_all(&self.root)?;
        let env = Envelope {
            schema: CACHE_SCHEMA.into(),
            key: key.clone(),
            sha256: digest(payload),
            payload: payload.clone(),
        };
        let tmp = self.root.join(format!(".{}.{}.tmp", key.file_name(), std::process::id()));
        fs::write(&tmp, serde_json::to_vec_pretty(&env)?)?;
        fs::rename(&tmp, self.path_for(key))?;
        Ok(())
    }

    fn files(&self) -> Result<Vec<PathBuf>> {
        if !self.root.exists() {
            return Ok(Vec::new());
        }
        let mut files: Vec<PathBuf> = fs::read_dir(&self.root)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        files.retain(|p| p.is_file());
        files.sort();
        Ok(files)
    }

    /// Verifies every entry and reports its state, sorted by file name.
    pub fn inspect(&self) -> Result<Vec<EntryInfo>> {
        let mut out = Vec::new();
        for path in self.files()? {
            let file = path.file_name().unwrap().to_string_lossy().into_owned();
            let bytes = fs::metadata(&path)?.len();
            let (key, problem) = if file.ends_with(".tmp") {
                (None, Some("interrupted write".to_string()))
            } else {
                match Self::read_envelope(&path) {
                    Ok(env) if env.key.file_name() != file => {
                        (Some(env.key), Some("file name does not match key".into()))
                    }
                    Ok(env) => (Some(env.key), None),
                    Err(Error::CacheIntegrity { reason, .. }) => (None, Some(reason)),
                    Err(e) => return Err(e),
                }
            };
            out.push(EntryInfo { file, bytes, key, problem });
        }
        Ok(out)
    }

    /// Deletes entries that fail verification and leftover temporary files.
    pub fn gc(&self) -> Result<GcReport> {
        let mut report = GcReport::default();
        for entry in self.inspect()? {
            if entry.problem.is_some() {
                fs::remove_file(self.root.join(&entry.file))?;
                report.removed.push(entry.file);
            } else {
                report.kept += 1;
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_write_once() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let key = CacheKey::table("F", 10, 3);
        assert_eq!(key.file_name(), "F-D10-G3.json");
        assert_eq!(CacheKey::series("LN", 4, 40).file_name(), "LN-D40-N4.json");
        assert_eq!(cache.get(&key).unwrap(), None);
        cache.put(&key, &json!({"a": ["1/2"]})).unwrap();
        assert_eq!(cache.get(&key).unwrap(), Some(json!({"a": ["1/2"]})));
        cache.put(&key, &json!({"a": ["1/2"]})).unwrap();
        assert!(matches!(cache.put(&key, &json!({"a": ["1/3"]})), Err(Error::CacheIntegrity { .. })));
    }

    #[test]
    fn tampering_is_detected_and_collected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let good = CacheKey::table("H", 5, 2);
        let bad = CacheKey::table("F", 5, 2);
        cache.put(&good, &json!([1, 2])).unwrap();
        cache.put(&bad, &json!(["4"])).unwrap();
        let path = cache.path_for(&bad);
        let text = fs::read_to_string(&path).unwrap().replace("\"4\"", "\"5\"");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.get(&bad), Err(Error::CacheIntegrity { .. })));
        fs::write(dir.path().join("junk.json"), "{not json").unwrap();

        let entries = cache.inspect().unwrap();
        assert_eq!(entries.len(), 3);
        let problems: Vec<_> = entries.iter().filter(|e| e.problem.is_some()).map(|e| e.file.as_str()).collect();
        assert_eq!(problems, vec!["F-D5-G2.json", "junk.json"]);

        let report = cache.gc().unwrap();
        assert_eq!(report.kept, 1);
        assert_eq!(report.removed, vec!["F-D5-G2.json".to_string(), "junk.json".to_string()]);
        assert_eq!(cache.get(&good).unwrap(), Some(json!([1, 2])));
    }

    #[test]
    fn misplaced_entry_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let a = CacheKey::table("F", 3, 1);
        let b = CacheKey::table("F", 4, 1);
        cache.put(&a, &json!([])).unwrap();
        fs::copy(cache.path_for(&a), cache.path_for(&b)).unwrap();
        assert!(matches!(cache.get(&b), Err(Error::CacheIntegrity { .. })));
    }
}
