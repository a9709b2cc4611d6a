use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use nine_fields::CurveRecord;
use serde::Serialize;
use serde_json::Value;
use tempfile::NamedTempFile;

use crate::config::SearchConfig;

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub config: SearchConfig,
    pub records: usize,
    pub per_family: BTreeMap<String, usize>,
    pub wall_time_secs: f64,
    pub summary: Value,
}

impl Manifest {
    pub fn new(cfg: &SearchConfig, records: &[CurveRecord], wall: Duration, summary: Value) -> Manifest {
        let mut per_family = BTreeMap::new();
        for r in records {
            *per_family.entry(r.family.clone()).or_insert(0) += 1;
        }
        Manifest {
            command: cfg.command.name().to_string(),
            config: cfg.clone(),
            records: records.len(),
            per_family,
            wall_time_secs: wall.as_secs_f64(),
            summary,
        }
    }
}

/// One JSON object per line, in the given order.
pub fn to_jsonl(records: &[CurveRecord]) -> Result<String> {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r)?);
        s.push('\n');
    }
    Ok(s)
}

/// The manifest written next to `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<NamedTempFile> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    Ok(tmp)
}

/// Write the records and the manifest. Both are staged in temporary files
/// and only renamed into place once both are complete; on error the
/// temporaries are dropped and nothing is left behind.
pub fn write_run(out: &Path, records: &[CurveRecord], manifest: &Manifest) -> Result<()> {
    let jsonl = write_atomic(out, to_jsonl(records)?.as_bytes())?;
    let mpath = manifest_path(out);
    let man = write_atomic(&mpath, serde_json::to_string_pretty(manifest)?.as_bytes())?;
    jsonl.persist(out).with_context(|| format!("writing {}", out.display()))?;
    if let Err(e) = man.persist(&mpath) {
        let _ = std::fs::remove_file(out);
        return Err(e).with_context(|| format!("writing {}", mpath.display()));
    }
    Ok(())
}
