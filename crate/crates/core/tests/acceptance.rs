//! Runs every acceptance criterion and prints one verdict line each.

use la_nodal::acceptance::{format_line, Suite};
use std::process::ExitCode;

fn main() -> ExitCode {
    let suite = match Suite::new() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot build the corpus: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut failed = 0;
    for id in 1..=13 {
        let r = suite.run(id);
        println!("{} ({:.1} s)", format_line(&r), r.elapsed.as_secs_f64());
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
