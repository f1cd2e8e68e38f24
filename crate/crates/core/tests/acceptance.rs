//! Acceptance suite: runs every criterion at its stated (exact) tolerance
//! and prints one pass/fail line per criterion.

use quadchi::acceptance::{run_all, VerifyConfig};

#[test]
fn acceptance_criteria() {
    let outcomes = run_all(&VerifyConfig::default());
    let mut all = true;
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} {}: {} — {}", o.id, o.title, o.detail);
        all &= o.passed;
    }
    assert!(all, "acceptance criteria failed");
}
