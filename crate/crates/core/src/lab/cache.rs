use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::report::Status;
use crate::error::Result;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "JNNF_CACHE_DIR";

/// The cached part of a report: everything that depends only on the input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub status: Status,
    pub witnesses: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Lookup {
    Hit(CacheEntry),
    Miss,
    /// Unreadable or mismatched entry; treated as a miss.
    Corrupt(String),
}

/// Write-once content-addressed store of [`CacheEntry`] files.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// The cache named by `JNNF_CACHE_DIR`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Ok(Some(Self::new(PathBuf::from(d))?)),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn lookup(&self, key: &str) -> Lookup {
        let path = self.path(key);
        let Ok(bytes) = fs::read(&path) else {
            return Lookup::Miss;
        };
        match serde_json::from_slice::<CacheEntry>(&bytes) {
            Ok(e) if e.key == key => Lookup::Hit(e),
            Ok(_) => Lookup::Corrupt(format!("{}: key mismatch", path.display())),
            Err(err) => Lookup::Corrupt(format!("{}: {err}", path.display())),
        }
    }

    /// Stores `entry` unless a valid entry already exists. The file is
    /// written under a temporary name and renamed into place.
    pub fn store(&self, entry: &CacheEntry) -> Result<()> {
        if matches!(self.lookup(&entry.key), Lookup::Hit(_)) {
            return Ok(());
        }
        let tmp = self.dir.join(format!(".{}.{}.tmp", entry.key, std::process::id()));
        fs::write(&tmp, serde_json::to_vec(entry)?)?;
        fs::rename(&tmp, self.path(&entry.key))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miss_hit_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path()).unwrap();
        assert_eq!(c.lookup("abc"), Lookup::Miss);
        let e = CacheEntry {
            key: "abc".into(),
            status: Status::Pass,
            witnesses: serde_json::json!({"order": 60}),
        };
        c.store(&e).unwrap();
        assert_eq!(c.lookup("abc"), Lookup::Hit(e.clone()));
        fs::write(dir.path().join("abc.json"), b"{not json").unwrap();
        assert!(matches!(c.lookup("abc"), Lookup::Corrupt(_)));
        c.store(&e).unwrap();
        assert_eq!(c.lookup("abc"), Lookup::Hit(e));
        assert_eq!(sha256_hex(b"").len(), 64);
    }
}
