//! On-disk polynomial cache: one JSON file per entry, named by a SHA-256 of
//! the entry key, written atomically and re-verified on every load.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use koornwinder::operator::ParamSet;
use koornwinder::solver::{koornwinder, verify_eigen, KoornwinderPoly};
use koornwinder::weights::DominantWeight;

use crate::CliError;

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    version: u32,
    key: String,
    poly: KoornwinderPoly,
}

pub fn entry_key(lam: &DominantWeight, p: &ParamSet) -> String {
    format!("l={};lambda={};{}", lam.len(), lam, p.canonical_key())
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create cache {}: {e}", dir.display())))?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(format!("v{CACHE_VERSION};{key}").as_bytes());
        let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{name}.json"))
    }

    /// A cached polynomial that still passes the eigen-equation, if any.
    pub fn load(&self, lam: &DominantWeight, p: &ParamSet) -> Option<KoornwinderPoly> {
        let key = entry_key(lam, p);
        let path = self.path_for(&key);
        let text = std::fs::read_to_string(&path).ok()?;
        let entry: CacheEntry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                return None;
            }
        };
        if entry.version != CACHE_VERSION
            || entry.key != key
            || &entry.poly.lam != lam
            || &entry.poly.params != p
        {
            log::warn!("ignoring mismatched cache entry {}", path.display());
            return None;
        }
        match verify_eigen(&entry.poly) {
            Ok(res) if res.is_zero() => Some(entry.poly),
            _ => {
                log::warn!(
                    "cache entry {} fails verification; recomputing",
                    path.display()
                );
                None
            }
        }
    }

    pub fn store(&self, poly: &KoornwinderPoly) -> Result<(), CliError> {
        let key = entry_key(&poly.lam, &poly.params);
        let entry = CacheEntry {
            version: CACHE_VERSION,
            key: key.clone(),
            poly: poly.clone(),
        };
        let io = |e: std::io::Error| CliError::Io(format!("cache write: {e}"));
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        serde_json::to_writer(&mut tmp, &entry).map_err(|e| CliError::Io(e.to_string()))?;
        tmp.flush().map_err(io)?;
        tmp.persist(self.path_for(&key)).map_err(|e| io(e.error))?;
        Ok(())
    }
}

/// Loads `P_λ` from the cache when possible, otherwise builds and stores it.
pub fn solve(
    lam: &DominantWeight,
    p: &ParamSet,
    cache: Option<&Cache>,
) -> Result<KoornwinderPoly, CliError> {
    if let Some(hit) = cache.and_then(|c| c.load(lam, p)) {
        return Ok(hit);
    }
    let poly = koornwinder(lam, p)?;
    if let Some(c) = cache {
        c.store(&poly)?;
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use koornwinder::exact::{int, rat};

    fn params() -> ParamSet {
        ParamSet::new(
            rat(1, 2),
            rat(1, 3),
            rat(1, 5),
            rat(-1, 7),
            rat(2, 9),
            int(0),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let lam = DominantWeight::new(vec![2, 1]).unwrap();
        let fresh = solve(&lam, &params(), Some(&cache)).unwrap();
        assert_eq!(cache.load(&lam, &params()), Some(fresh));
    }

    #[test]
    fn tampered_entry_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let lam = DominantWeight::new(vec![1, 0]).unwrap();
        let mut poly = solve(&lam, &params(), Some(&cache)).unwrap();
        poly.coeffs
            .add_term(DominantWeight::new(vec![0, 0]).unwrap(), int(1));
        let path = cache.path_for(&entry_key(&lam, &params()));
        let entry = CacheEntry {
            version: CACHE_VERSION,
            key: entry_key(&lam, &params()),
            poly,
        };
        std::fs::write(&path, serde_json::to_string(&entry).unwrap()).unwrap();
        assert!(cache.load(&lam, &params()).is_none());
        std::fs::write(&path, "{not json").unwrap();
        assert!(cache.load(&lam, &params()).is_none());
    }
}
