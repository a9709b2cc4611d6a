use anyhow::Result;
use nine_fields::cm_families::cm_catalog;
use nine_fields::mod2_square_disc::search_square_disc;
use nine_fields::odd_torsion::{enumerate_torsion, enumerate_torsion3_eisenstein};
use nine_fields::two_torsion::{
    enumerate_additive, enumerate_good_twist, prime_power_sweep, setzer_neumann_search, sort_records,
    sporadic_family,
};
use nine_fields::{CurveRecord, Field};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::config::{Command, FamilyFilter, SearchConfig};

/// Records produced by a run, with command-specific summary data for the manifest.
pub struct RunOutput {
    pub records: Vec<CurveRecord>,
    pub extra: Value,
}

/// Default discriminant-norm bound for the open family over `Q(sqrt(-3))`.
pub const EISENSTEIN_DEFAULT_BOUND: u64 = 1_000_000;

pub fn run_search(cfg: &SearchConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let k = Field::new(cfg.d as i64)?;
    match cfg.command {
        Command::CmCatalog => {
            let cat = cm_catalog(k, cfg.bound);
            let extra = json!({
                "primes_tested": cat.primes_tested,
                "admissible": cat.admissible,
                "density": cat.density(),
                "failures": cat.failures,
            });
            Ok(RunOutput { records: cat.records, extra })
        }
        Command::Torsion { ell: 3 } if cfg.d == 3 => {
            let found = enumerate_torsion3_eisenstein(cfg.bound);
            let fails = found.iter().filter(|c| !c.dichotomy_holds()).count();
            let extra = json!({ "disc_norm_bound": cfg.bound, "dichotomy_failures": fails });
            Ok(RunOutput {
                records: found.into_iter().map(|c| c.curve.record).collect(),
                extra,
            })
        }
        Command::Torsion { ell } => {
            let bound = BigInt::from(cfg.bound);
            let records: Vec<CurveRecord> = enumerate_torsion(ell, k)?
                .into_iter()
                .map(|c| c.record)
                .filter(|r| r.disc_min().norm() <= bound)
                .collect();
            Ok(RunOutput { records, extra: json!({ "disc_norm_bound": cfg.bound }) })
        }
        Command::TwoTorsion => {
            let mut records = Vec::new();
            let want = |f: FamilyFilter| cfg.family == f || (cfg.family == FamilyFilter::All && f != FamilyFilter::Sweep);
            if want(FamilyFilter::Good) {
                records.extend(enumerate_good_twist(k, cfg.bound)?);
            }
            if want(FamilyFilter::Additive) {
                records.extend(enumerate_additive(k)?);
            }
            if want(FamilyFilter::Sn) {
                records.extend(setzer_neumann_search(k, cfg.bound)?);
            }
            if want(FamilyFilter::Sporadic) {
                for u in k.units() {
                    records.extend(sporadic_family(u)?);
                }
            }
            if want(FamilyFilter::Sweep) {
                records.extend(prime_power_sweep(k, cfg.bound)?);
            }
            sort_records(&mut records);
            Ok(RunOutput { records, extra: json!({ "family": cfg.family }) })
        }
        Command::Mod2Search => Ok(RunOutput {
            records: search_square_disc(cfg.d, cfg.bound)?,
            extra: json!({ "parameter_norm_bound": cfg.bound }),
        }),
    }
}
