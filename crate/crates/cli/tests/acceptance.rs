//! The acceptance suite: every registry check must pass, one printed line
//! per criterion. `cargo test --test acceptance -- --nocapture` shows the
//! per-criterion lines; the assertion collects every failure first so a
//! single red criterion does not hide the rest.

use msplab_core::acceptance::{checks, CheckStatus};

#[test]
fn acceptance_criteria() {
    let mut failures = vec![];
    for check in checks() {
        let started = std::time::Instant::now();
        let outcome = (check.run)();
        let status = match outcome.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
        };
        println!(
            "[{status}] {} — {} (verified: {}; {:.1}s)",
            outcome.check_id,
            outcome.title,
            outcome.order,
            started.elapsed().as_secs_f64()
        );
        for d in &outcome.detail {
            println!("        {d}");
        }
        if let Some(f) = &outcome.first_failure {
            println!("        first failure: {f}");
        }
        if outcome.status == CheckStatus::Fail {
            failures.push(format!("{}: {:?}", outcome.check_id, outcome.first_failure));
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:#?}");
}
