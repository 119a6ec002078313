//! Release gate: one line per acceptance criterion, non-zero exit if any fails.
//!
//! Thresholds are the fixed per-criterion values; no tolerance cap is applied.

use std::process::ExitCode;
use std::time::Instant;

use qptheta::cli::verify::{theta_integral_sides, CRITERIA};

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    println!("\nrunning {} acceptance criteria", CRITERIA.len());
    for criterion in &CRITERIA {
        let cases = criterion.run(f64::INFINITY);
        let pass = cases.iter().all(|c| c.pass);
        let worst = cases
            .iter()
            .map(|c| {
                if c.tolerance == 0.0 {
                    format!("{} = {} of {}", c.name, c.actual, c.expected)
                } else {
                    format!("{} = {:.3e} (limit {:.0e})", c.name, c.actual, c.tolerance)
                }
            })
            .collect::<Vec<_>>()
            .join("; ");
        println!("criterion {:>2} {:<30} {}  [{worst}]", criterion.id, criterion.title, if pass { "PASS" } else { "FAIL" });
        for c in cases.iter().filter(|c| c.error.is_some()) {
            println!("    {}: {}", c.name, c.error.as_deref().unwrap_or_default());
        }
        if !pass {
            failed += 1;
        }
    }

    // the variant weighting exp(nu/2 wbar^2) with right side exp(-nu z^2) theta(z) does not hold
    match theta_integral_sides(None) {
        Ok(s) => {
            let gap = (s.variant_lhs - s.variant_rhs).norm() / s.variant_rhs.norm();
            println!("note: variant theta integral identity differs by {gap:.3e} (relative); reproducing form is the one gated");
        }
        Err(e) => println!("note: variant theta integral could not be evaluated: {e}"),
    }

    println!(
        "acceptance: {} passed; {failed} failed; finished in {:.2}s\n",
        CRITERIA.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
