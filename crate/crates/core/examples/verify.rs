// The full acceptance suite, as run by `qptheta verify all`.
//
// cargo run --release --example verify

use qptheta::cli::verify::{verify_suite, DEFAULT_TOL};
use qptheta::{Error, Result};

pub fn run_example() -> Result<()> {
    let report = verify_suite(DEFAULT_TOL);
    for case in &report.cases {
        let mark = if case.pass { "ok  " } else { "FAIL" };
        println!("{mark} {:<36} {:.2e} <= {:.0e}", case.name, (case.actual - case.expected).abs(), case.tolerance);
    }
    println!("{} cases in {:.2}s", report.cases.len(), report.wall_time);
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Evaluation { node: "verify".into(), reason: "some cases failed".into() })
    }
}

fn main() {
    run_example().expect("verification failed");
}
