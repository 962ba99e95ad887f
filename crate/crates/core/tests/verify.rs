use std::time::Duration;

use prefattach::verify::{criteria, run, Suite, VerifyReport};

#[test]
fn criteria_are_numbered_once() {
    let ids: Vec<u32> = criteria().iter().map(|c| c.id).collect();
    assert_eq!(ids, (1..=14).collect::<Vec<_>>());
    assert!("exact".parse::<Suite>().is_ok());
    assert!("other".parse::<Suite>().is_err());
}

#[test]
fn selected_criteria_round_trip_through_json() {
    let report = run(None, Some(&[3, 4]), 7, None).unwrap();
    assert!(report.complete);
    assert_eq!(report.criteria.len(), 2);
    assert!(report.all_passed(), "{}", report.to_json());
    let back: VerifyReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn zero_budget_stops_early() {
    let report = run(Some(Suite::Exact), None, 7, Some(Duration::ZERO)).unwrap();
    assert!(!report.complete);
    assert!(report.criteria.len() < 6);
}

#[test]
fn unknown_criterion_is_an_error() {
    assert!(run(None, Some(&[99]), 7, None).is_err());
}
