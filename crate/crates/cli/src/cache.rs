//! Persistent JSON cache for MNC cells.
//!
//! Entries are keyed by a SHA-256 digest of everything that determines the
//! value: code version, channel constants, model, power and quadrature
//! tolerances. Values are stored as raw `f64` bit patterns so a warm run
//! reproduces a cold one exactly.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::Context;
use fibercap_core::mathkit::QuadratureSpec;
use fibercap_core::DiscreteChannelParams;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::model::Model;

const FORMAT: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub bits: u64,
    pub flags: Vec<String>,
}

impl Entry {
    pub fn new(value: f64, flags: Vec<String>) -> Self {
        Self {
            bits: value.to_bits(),
            flags,
        }
    }

    pub fn value(&self) -> f64 {
        f64::from_bits(self.bits)
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    format: u32,
    entries: BTreeMap<String, Entry>,
}

pub fn cache_key(
    params: &DiscreteChannelParams,
    model: Model,
    power_dbm: f64,
    spec: &QuadratureSpec,
) -> String {
    let material = format!(
        "{}|{}|{:016x}|{:016x}|{}|{:016x}|{:016x}|{:016x}|{}|{:016x}",
        FORMAT,
        env!("CARGO_PKG_VERSION"),
        params.eta.to_bits(),
        params.noise_power_w.to_bits(),
        model,
        power_dbm.to_bits(),
        spec.abs_tol.to_bits(),
        spec.rel_tol.to_bits(),
        spec.max_nodes,
        spec.tail_cutoff_sigmas.to_bits(),
    );
    let digest = Sha256::digest(material.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// In-memory entries plus an optional backing file, rewritten whole on
/// every commit.
#[derive(Debug)]
pub struct Cache {
    path: Option<PathBuf>,
    entries: Mutex<BTreeMap<String, Entry>>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self {
            path: None,
            entries: Mutex::new(BTreeMap::new()),
        }
    }

    /// Opens `path`, starting empty when it does not exist. A file written by
    /// another format version is ignored and replaced on the next commit.
    pub fn open(path: &Path) -> anyhow::Result<Self> {
        let entries = match std::fs::read_to_string(path) {
            Ok(text) => {
                let file: CacheFile = serde_json::from_str(&text)
                    .with_context(|| format!("reading cache {}", path.display()))?;
                if file.format == FORMAT {
                    file.entries
                } else {
                    BTreeMap::new()
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e).with_context(|| format!("reading cache {}", path.display())),
        };
        Ok(Self {
            path: Some(path.to_path_buf()),
            entries: Mutex::new(entries),
        })
    }

    pub fn is_enabled(&self) -> bool {
        self.path.is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &str) -> Option<Entry> {
        if !self.is_enabled() {
            return None;
        }
        self.entries.lock().expect("cache lock").get(key).cloned()
    }

    /// Adds entries and rewrites the file via a temporary sibling and rename.
    pub fn commit(&self, new: Vec<(String, Entry)>) -> anyhow::Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if new.is_empty() {
            return Ok(());
        }
        let mut entries = self.entries.lock().expect("cache lock");
        entries.extend(new);
        let file = CacheFile {
            format: FORMAT,
            entries: entries.clone(),
        };
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(&file)?)
            .with_context(|| format!("writing {}", tmp.display()))?;
        std::fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))?;
        Ok(())
    }
}
