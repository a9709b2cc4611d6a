use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nine_fields::Field;
use nine_fields_cli::acceptance::Acceptance;
use nine_fields_cli::commands::EISENSTEIN_DEFAULT_BOUND;
use nine_fields_cli::verify::{parse_ainvs, verify_curve};
use nine_fields_cli::{init_workers, run, Command, FamilyFilter, SearchConfig};

#[derive(Parser)]
#[command(name = "nine-fields", version, about = "Elliptic curves of odd prime-power conductor over the nine class-number-one imaginary quadratic fields")]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true, env = "NINEFIELDS_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// The field Q(sqrt(-d)).
    #[arg(long)]
    d: u32,
    /// Write JSONL records here (and a manifest beside it) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// CM twists by admissible primes of norm up to the bound.
    CmCatalog {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        bound: u64,
    },
    /// Curves with a point of odd order ell.
    Torsion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ell: u32,
        /// Bound on the norm of the minimal discriminant.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Curves with a rational 2-torsion point.
    TwoTorsion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        bound: u64,
        #[arg(long, value_enum, default_value = "all")]
        family: FamilyFilter,
    },
    /// Square-discriminant curves with cyclic mod-2 image of order three.
    Mod2Search {
        #[command(flatten)]
        common: Common,
        /// Bound on the norms of the family parameters.
        #[arg(long)]
        bound: u64,
    },
    /// Local data, Szpiro status, torsion and 2-division data of one curve.
    VerifyCurve {
        #[arg(long)]
        d: u32,
        /// Five comma-separated coefficients, e.g. `0,w,1,-1,0`.
        #[arg(long, allow_hyphen_values = true)]
        ainvs: String,
    },
    /// Run the acceptance criteria and print one line per criterion.
    Acceptance {
        /// Criteria to run, e.g. `1,7,9`; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

fn search_config(cli_workers: Option<usize>, cmd: Cmd) -> Option<SearchConfig> {
    let (common, command, bound, family) = match cmd {
        Cmd::CmCatalog { common, bound } => (common, Command::CmCatalog, bound, FamilyFilter::All),
        Cmd::Torsion { common, ell, bound } => {
            let default = if ell == 3 && common.d == 3 { EISENSTEIN_DEFAULT_BOUND } else { u64::MAX };
            (common, Command::Torsion { ell }, bound.unwrap_or(default), FamilyFilter::All)
        }
        Cmd::TwoTorsion { common, bound, family } => (common, Command::TwoTorsion, bound, family),
        Cmd::Mod2Search { common, bound } => (common, Command::Mod2Search, bound, FamilyFilter::All),
        _ => return None,
    };
    let mut cfg = SearchConfig::new(common.d, command, bound);
    cfg.family = family;
    cfg.out = common.out;
    cfg.workers = cli_workers;
    Some(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_workers(cli.workers);
    match cli.cmd {
        Cmd::VerifyCurve { d, ainvs } => {
            let report = Field::new(d as i64)
                .map_err(anyhow::Error::from)
                .and_then(|k| parse_ainvs(k, &ainvs));
            let e = match report {
                Ok(e) => e,
                Err(err) => {
                    eprintln!("error: {err:#}");
                    return ExitCode::from(2);
                }
            };
            match verify_curve(&e) {
                Ok(r) => {
                    // a closed pipe (e.g. `| head`) is not an error
                    let _ = write!(std::io::stdout().lock(), "{r}");
                    ExitCode::SUCCESS
                }
                Err(err) => {
                    eprintln!("error: {err:#}");
                    ExitCode::FAILURE
                }
            }
        }
        Cmd::Acceptance { only, seed } => {
            let ids: Vec<u8> = if only.is_empty() { (1..=10).collect() } else { only };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=10).contains(&i)) {
                eprintln!("error: no criterion {bad}");
                return ExitCode::from(2);
            }
            let outcomes = Acceptance::new(seed).run(&ids, |o| println!("{o}"));
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        cmd => {
            let cfg = search_config(cli.workers, cmd).expect("search command");
            if let Err(err) = cfg.validate() {
                eprintln!("error: {err:#}");
                return ExitCode::from(2);
            }
            match run(&cfg) {
                Ok(_) => ExitCode::SUCCESS,
                Err(err) => {
                    eprintln!("error: {err:#}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
