//! Judgment persistence: `judgments.ndjson` is the append-only audit trail,
//! `judgments.json` the compacted current verdicts.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use abspm_core::assessment::{Judgment, JudgmentStore};

use crate::error::{Error, Result};
use crate::project::write_atomic;

pub const AUDIT_FILE: &str = "judgments.ndjson";
pub const CURRENT_FILE: &str = "judgments.json";

pub fn audit_path(root: &Path) -> PathBuf {
    root.join(AUDIT_FILE)
}

/// Rebuilds the store from the audit trail; an absent file is an empty store.
pub fn load(root: &Path) -> Result<JudgmentStore> {
    let path = audit_path(root);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(JudgmentStore::new()),
        Err(e) => return Err(Error::io(&path, e)),
    };
    let mut audit = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let j: Judgment =
            serde_json::from_str(line).map_err(|e| Error::parse(&path, i as u64 + 1, e.to_string()))?;
        audit.push(j);
    }
    Ok(JudgmentStore::replay(audit))
}

/// Appends `new` to the audit trail and rewrites the compacted file from
/// `store`, which must already contain them.
pub fn persist(root: &Path, new: &[Judgment], store: &JudgmentStore) -> Result<()> {
    let path = audit_path(root);
    let mut lines = String::new();
    for j in new {
        lines.push_str(&serde_json::to_string(j).map_err(|e| Error::Internal(e.to_string()))?);
        lines.push('\n');
    }
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .map_err(|e| Error::io(&path, e))?;
    f.write_all(lines.as_bytes()).map_err(|e| Error::io(&path, e))?;
    f.sync_all().map_err(|e| Error::io(&path, e))?;

    let current: Vec<&Judgment> = store.current().collect();
    let mut text = serde_json::to_string_pretty(&current).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    write_atomic(&root.join(CURRENT_FILE), text.as_bytes())
}
