use std::path::PathBuf;

use anyhow::{bail, Result};
use nine_fields::NINE_FIELDS;
use serde::Serialize;

/// Which search a run performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CmCatalog,
    Torsion { ell: u32 },
    TwoTorsion,
    Mod2Search,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CmCatalog => "cm-catalog",
            Command::Torsion { .. } => "torsion",
            Command::TwoTorsion => "two-torsion",
            Command::Mod2Search => "mod2-search",
        }
    }
}

/// Families selectable in `two-torsion`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyFilter {
    Sn,
    Sporadic,
    Good,
    Additive,
    /// The brute-force sweep over `(a, b)`; not part of `all`.
    Sweep,
    All,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    pub d: u32,
    pub command: Command,
    pub bound: u64,
    pub family: FamilyFilter,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(d: u32, command: Command, bound: u64) -> SearchConfig {
        SearchConfig {
            d,
            command,
            bound,
            family: FamilyFilter::All,
            out: None,
            workers: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !NINE_FIELDS.contains(&self.d) {
            bail!("d = {} is not one of {:?}", self.d, NINE_FIELDS);
        }
        if self.bound < 2 {
            bail!("bound must be at least 2, got {}", self.bound);
        }
        if let Command::Torsion { ell } = self.command {
            if ![3, 5, 7].contains(&ell) {
                bail!("ell must be 3, 5 or 7, got {ell}");
            }
        }
        if self.command == Command::Mod2Search && !nine_fields::mod2_square_disc::CYCLIC_FIELDS.contains(&self.d) {
            bail!(
                "mod2-search needs d in {:?}, got {}",
                nine_fields::mod2_square_disc::CYCLIC_FIELDS,
                self.d
            );
        }
        Ok(())
    }
}

/// Size the global rayon pool. Later calls are ignored by rayon, which is
/// fine: the first configuration wins for the process.
pub fn init_workers(workers: Option<usize>) {
    if let Some(n) = workers.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
