//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::process::ExitCode;

use shiftlab_cli::scenarios::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let mut failures = 0;
    for c in &CRITERIA {
        let r = run_criterion(c);
        let e = r.elapsed;
        match &r.outcome {
            Ok(detail) => println!("PASS [{:>2}] {} ({e:.2?}): {detail}", r.id, r.title),
            Err(why) => {
                failures += 1;
                println!("FAIL [{:>2}] {} ({e:.2?}): {why}", r.id, r.title);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failures, CRITERIA.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
