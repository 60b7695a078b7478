//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to
//! see the report; the test fails if any criterion fails.

use frackw::selftest::Acceptance;

#[test]
fn acceptance_criteria() {
    let outcomes = Acceptance::new(0).run_all(false);
    println!();
    for o in &outcomes {
        println!("{o}");
    }
    assert_eq!(outcomes.len(), 11);
    let failed: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
