//! Content-addressed cache for computed class groups.
//!
//! An entry is keyed by the sha-256 of a descriptor string covering the
//! radicand, the tool version, and the full budget set, so any budget
//! change misses cleanly. The payload carries its own digest; a mismatch
//! (truncation, tampering, partial write) is reported and the data is
//! recomputed and rewritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cubisym_core::budget::Budgets;
use cubisym_core::classgrp::ClassGroup;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    Off,
}

impl CacheStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CacheStatus::Hit => "hit",
            CacheStatus::Miss => "miss",
            CacheStatus::Off => "off",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    descriptor: String,
    sha256: String,
    payload: String,
}

fn descriptor(m: i64, budgets: &Budgets) -> String {
    format!(
        "cubisym/1 classgroup m={m} version={VERSION} budgets={}",
        serde_json::to_string(budgets).expect("budgets serialize")
    )
}

fn entry_path(dir: &Path, desc: &str) -> PathBuf {
    let digest = Sha256::digest(desc.as_bytes());
    dir.join(format!("cg-{}.json", hex::encode(digest)))
}

/// None: clean miss. Err: entry present but unusable, with the reason.
fn load(dir: &Path, desc: &str) -> Result<Option<ClassGroup>, String> {
    let path = entry_path(dir, desc);
    let raw = match fs::read(&path) {
        Ok(r) => r,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(format!("cache read {}: {e}", path.display())),
    };
    let entry: Entry = serde_json::from_slice(&raw)
        .map_err(|e| format!("cache entry {} is malformed: {e}", path.display()))?;
    if entry.descriptor != desc {
        return Ok(None);
    }
    let digest = hex::encode(Sha256::digest(entry.payload.as_bytes()));
    if digest != entry.sha256 {
        return Err(format!("cache entry {} failed its checksum", path.display()));
    }
    let cg: ClassGroup = serde_json::from_str(&entry.payload)
        .map_err(|e| format!("cache payload {} is malformed: {e}", path.display()))?;
    Ok(Some(cg))
}

fn store(dir: &Path, desc: &str, cg: &ClassGroup) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cache dir {}: {e}", dir.display()))?;
    let payload = serde_json::to_string(cg).expect("class group serialize");
    let entry = Entry {
        descriptor: desc.to_string(),
        sha256: hex::encode(Sha256::digest(payload.as_bytes())),
        payload,
    };
    let path = entry_path(dir, desc);
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_vec(&entry).expect("entry serialize"))
        .map_err(|e| format!("cache write {}: {e}", tmp.display()))?;
    fs::rename(&tmp, &path).map_err(|e| format!("cache commit {}: {e}", path.display()))
}

/// Fetch or compute the class group of the order's field. Cache problems
/// are never fatal: they surface as warnings and force recomputation.
pub fn class_group_for(
    order: &cubisym_core::kummer::NumberFieldOrder,
    budgets: &Budgets,
    dir: Option<&Path>,
    warnings: &mut Vec<String>,
) -> Result<(ClassGroup, CacheStatus), cubisym_core::classgrp::ClassError> {
    let desc = descriptor(order.m, budgets);
    let Some(dir) = dir else {
        return Ok((ClassGroup::compute(order, budgets)?, CacheStatus::Off));
    };
    match load(dir, &desc) {
        Ok(Some(cg)) => return Ok((cg, CacheStatus::Hit)),
        Ok(None) => {}
        Err(w) => warnings.push(w),
    }
    let cg = ClassGroup::compute(order, budgets)?;
    if let Err(w) = store(dir, &desc, &cg) {
        warnings.push(w);
    }
    Ok((cg, CacheStatus::Miss))
}
