//! Runs every acceptance criterion with its tolerance and time limit and
//! prints one pass/fail line per criterion.
//!
//! Criterion 6 cannot be met in full: for D4 and E7 at e = 2 the general
//! complete intersection is singular along a line through the origin, so the
//! isolated-singularity check fails for every draw. The test asserts that
//! exactly these two cases fail and everything else passes.
//!
//! Built without the libtest harness so the table is always shown.

use jetfiber::verify::{run_criterion, CriterionResult, VerifyOptions};
use serde_json::Value;

fn failing_hdv_cases(r: &CriterionResult) -> Vec<String> {
    r.details
        .as_array()
        .map(|rows| {
            rows.iter()
                .filter(|row| row["pass"] != Value::Bool(true))
                .map(|row| format!("e={} {}", row["e"], row["type"].as_str().unwrap_or("?")))
                .collect()
        })
        .unwrap_or_default()
}

fn main() {
    let opts = VerifyOptions::default();
    let results: Vec<CriterionResult> = (1..=10).map(|id| run_criterion(id, &opts).expect("criterion exists")).collect();
    for r in &results {
        println!("{}", r.line());
    }
    let mut unexpected = Vec::new();
    for r in &results {
        if r.id == 6 {
            let mut failing = failing_hdv_cases(r);
            failing.sort();
            if failing != ["e=2 D4", "e=2 E7"] {
                unexpected.push(format!("criterion 6 failure set changed: {failing:?}"));
            }
        } else if !r.passed {
            unexpected.push(r.line());
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all results as expected (criterion 6 fails only for e=2 D4, e=2 E7)");
    } else {
        eprintln!("unexpected results:\n{}", unexpected.join("\n"));
        std::process::exit(1);
    }
}
