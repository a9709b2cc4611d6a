//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;

use nine_fields_cli::acceptance::Acceptance;

fn main() -> ExitCode {
    let ids: Vec<u8> = (1..=10).collect();
    println!("running {} acceptance criteria", ids.len());
    let outcomes = Acceptance::new(2024).run(&ids, |o| println!("{o}"));
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("acceptance: {} passed, {} failed", outcomes.len() - failed.len(), failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
