//! Content-addressed report cache, enabled by setting `DGFORGE_CACHE_DIR`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::Report;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "DGFORGE_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    engine_version: String,
    key: String,
    report: Report,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hash of the engine version, the command with its parameters, and the self-contained inputs.
    pub fn key(command: &str, parameters: &str, inputs: &[String]) -> String {
        let mut h = Sha256::new();
        for part in [ENGINE_VERSION, command, parameters].into_iter().chain(inputs.iter().map(String::as_str)) {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored report, if present, readable and written by this engine version.
    pub fn get(&self, key: &str) -> Option<Report> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (e.engine_version == ENGINE_VERSION && e.key == key).then_some(e.report)
    }

    /// Writes through a temporary file in the cache directory and renames it into place.
    pub fn put(&self, key: &str, report: &Report) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry { engine_version: ENGINE_VERSION.into(), key: key.into(), report: report.clone() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested"));
        let key = Cache::key("homology", "{}", &["doc".into()]);
        assert!(cache.get(&key).is_none());
        let mut r = Report::new("homology");
        r.cert("ok", true);
        cache.put(&key, &r).unwrap();
        assert_eq!(cache.get(&key), Some(r));
        let leftovers = fs::read_dir(cache.dir()).unwrap().count();
        assert_eq!(leftovers, 1);
    }

    #[test]
    fn keys_separate_their_parts() {
        assert_ne!(Cache::key("a", "bc", &[]), Cache::key("ab", "c", &[]));
        assert_ne!(Cache::key("a", "", &["x".into()]), Cache::key("a", "", &["x".into(), String::new()]));
    }

    #[test]
    fn entries_from_other_versions_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = Cache::key("c", "", &[]);
        let e = Entry { engine_version: "0.0.0-other".into(), key: key.clone(), report: Report::new("c") };
        fs::write(cache.path(&key), serde_json::to_string(&e).unwrap()).unwrap();
        assert!(cache.get(&key).is_none());
    }
}
