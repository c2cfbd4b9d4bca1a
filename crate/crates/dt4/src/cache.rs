//! Append-only JSON-lines cache of per-partition results.
//!
//! Entries are keyed by canonical partition key and engine version. Lines
//! that fail to parse are skipped with a warning. Writes from one process go
//! through a single locked handle; separate processes may append to the
//! same file since entries for a key are identical.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use dt4_core::combinatorics::omega_c;
use dt4_core::verifier::{omega_from_weight, VerifierError, WeightEntry};
use dt4_core::{BigRational, DPartition, LinearFormFactored};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::formats::{factored_from_json, factored_to_json, rational_to_string, FormatError};

pub const ENGINE_VERSION: &str = concat!("dt4-", env!("CARGO_PKG_VERSION"));
pub const CACHE_ENV: &str = "DT4_CACHE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub engine_version: String,
    pub weight: Value,
    pub omega: Option<String>,
    pub sign: Option<i8>,
    pub omega_c: String,
}

impl CacheEntry {
    pub fn compute(pi: &DPartition) -> Result<Self, VerifierError> {
        let entry = WeightEntry::compute(pi.clone())?;
        let limit = omega_from_weight(pi, &entry.weight).ok();
        Ok(CacheEntry {
            key: entry.key.as_str().to_string(),
            engine_version: ENGINE_VERSION.to_string(),
            weight: factored_to_json(&entry.weight),
            omega: limit.as_ref().map(|s| rational_to_string(&s.omega)),
            sign: limit.as_ref().map(|s| s.sign),
            omega_c: rational_to_string(&omega_c(pi)),
        })
    }

    pub fn weight(&self) -> Result<LinearFormFactored<BigRational>, FormatError> {
        factored_from_json(&self.weight)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

pub struct Cache {
    path: PathBuf,
    entries: Mutex<BTreeMap<String, CacheEntry>>,
    writer: Mutex<File>,
    warnings: Vec<String>,
}

impl Cache {
    pub fn open(path: impl AsRef<Path>) -> io::Result<Cache> {
        let path = path.as_ref().to_path_buf();
        let mut writer = OpenOptions::new().create(true).append(true).open(&path)?;
        let (entries, warnings) = read_entries(&path)?;
        // never glue a new line onto a truncated one
        let bytes = std::fs::read(&path)?;
        if bytes.last().is_some_and(|&b| b != b'\n') {
            writer.write_all(b"\n")?;
        }
        Ok(Cache {
            path,
            entries: Mutex::new(entries),
            writer: Mutex::new(writer),
            warnings,
        })
    }

    /// The cache named by `DT4_CACHE`, if set.
    pub fn from_env() -> Option<io::Result<Cache>> {
        std::env::var_os(CACHE_ENV).map(Cache::open)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Problems met while reading the file.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &str) -> Option<CacheEntry> {
        self.entries.lock().expect("cache lock").get(key).cloned()
    }

    /// Stored entry for `pi`, or a freshly computed one that is then appended.
    pub fn lookup_or_compute(&self, pi: &DPartition) -> anyhow::Result<CacheEntry> {
        let key = pi.canonical_key().into_string();
        if let Some(hit) = self.get(&key) {
            return Ok(hit);
        }
        let entry = CacheEntry::compute(pi)?;
        let mut entries = self.entries.lock().expect("cache lock");
        if let Some(hit) = entries.get(&key) {
            return Ok(hit.clone());
        }
        let mut line = entry.to_line();
        line.push('\n');
        {
            let mut w = self.writer.lock().expect("cache writer lock");
            w.write_all(line.as_bytes())?;
            w.flush()?;
        }
        entries.insert(key, entry.clone());
        Ok(entry)
    }

    /// Weight entry for `pi` through the cache.
    pub fn weight_entry(&self, pi: &DPartition) -> anyhow::Result<WeightEntry> {
        let e = self.lookup_or_compute(pi)?;
        Ok(WeightEntry {
            partition: pi.clone(),
            key: pi.canonical_key(),
            weight: e.weight()?,
        })
    }
}

fn read_entries(path: &Path) -> io::Result<(BTreeMap<String, CacheEntry>, Vec<String>)> {
    let mut entries = BTreeMap::new();
    let mut warnings = Vec::new();
    let file = File::open(path)?;
    for (no, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CacheEntry>(&line) {
            Ok(e) if e.engine_version == ENGINE_VERSION => {
                if let Some(prev) = entries.get(&e.key) {
                    if prev != &e {
                        warnings.push(format!(
                            "{}:{}: conflicting entry for {} ignored",
                            path.display(),
                            no + 1,
                            e.key
                        ));
                    }
                    continue;
                }
                entries.insert(e.key.clone(), e);
            }
            Ok(_) => {}
            Err(err) => warnings.push(format!(
                "{}:{}: skipping corrupt cache line: {err}",
                path.display(),
                no + 1
            )),
        }
    }
    Ok((entries, warnings))
}
