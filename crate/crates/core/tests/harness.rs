use nonclassical::error::Error;
use nonclassical::harness::{run_suite, SuiteParams, SUITE_NAMES};

fn small(seed: u64) -> SuiteParams {
    SuiteParams { p: Some(2), n: Some(3), degree: Some(3), trials: Some(12), seed, budget: None }
}

#[test]
fn every_suite_passes_on_small_parameters() {
    for &name in SUITE_NAMES {
        let report = run_suite(name, &small(5)).unwrap();
        let failing: Vec<&str> = report.failures().map(|c| c.check.as_str()).collect();
        assert!(report.passed, "{name}: {failing:?}");
        assert!(!report.checks.is_empty(), "{name}");
        assert_eq!(report.suite, name);
    }
}

#[test]
fn reports_are_reproducible_and_self_describing() {
    let first = run_suite("gowers-props", &small(9)).unwrap().to_json_string();
    let second = run_suite("gowers-props", &small(9)).unwrap().to_json_string();
    assert_eq!(first, second);
    let json: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(json["rng"], "splitmix64");
    assert_eq!(json["params"]["seed"], 9);
    assert!(json["checks"].as_array().is_some_and(|c| !c.is_empty()));
    let other = run_suite("gowers-props", &small(10)).unwrap().to_json_string();
    assert_ne!(first, other);
}

#[test]
fn unknown_suites_are_rejected() {
    assert!(matches!(run_suite("no-such-suite", &small(0)), Err(Error::UnknownSuite(_))));
}

#[test]
fn text_report_lists_every_check() {
    let report = run_suite("lucas", &SuiteParams { n: Some(4), degree: Some(4), ..SuiteParams::with_seed(1) }).unwrap();
    let text = report.to_text();
    assert_eq!(text.lines().filter(|l| l.contains("PASS")).count(), report.checks.len());
}
