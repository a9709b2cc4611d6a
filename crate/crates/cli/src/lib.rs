//! Command-line driver for the searches in `nine_fields`: configuration,
//! JSONL output with a run manifest, curve verification and the acceptance
//! suite.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::io::Write;
use std::time::Instant;

use anyhow::Result;

pub use commands::{run_search, RunOutput};
pub use config::{init_workers, Command, FamilyFilter, SearchConfig};
pub use output::{manifest_path, to_jsonl, write_run, Manifest};

/// Run a search and persist its output. Without `out`, records go to stdout
/// and the manifest to stderr.
pub fn run(cfg: &SearchConfig) -> Result<Manifest> {
    let t = Instant::now();
    let res = run_search(cfg)?;
    let manifest = Manifest::new(cfg, &res.records, t.elapsed(), res.extra);
    match &cfg.out {
        Some(path) => write_run(path, &res.records, &manifest)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(to_jsonl(&res.records)?.as_bytes())?;
            stdout.flush()?;
            eprintln!("{}", serde_json::to_string(&manifest)?);
        }
    }
    Ok(manifest)
}
