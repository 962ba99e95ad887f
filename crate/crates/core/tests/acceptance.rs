//! Runs every acceptance criterion at full scale and prints one line each.
//!
//! `ACCEPTANCE_SEED` overrides the master seed; `ACCEPTANCE_ONLY` takes a
//! comma-separated list of criterion ids.

use std::process::ExitCode;

use prefattach::verify::{criteria, DEFAULT_SEED};

fn main() -> ExitCode {
    let seed = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for c in criteria() {
        if only.as_ref().is_some_and(|ids| !ids.contains(&c.id)) {
            continue;
        }
        let r = c.run(seed);
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {:>2} {} ({:.1}s): {}", r.id, r.name, r.seconds, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    println!("{failed} criteria failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
