use hybridgraph::fixtures::{run_fixtures, FixtureOptions};
use hybridgraph::rational::frac;

#[test]
fn every_fixture_check_passes() {
    let checks = run_fixtures(&FixtureOptions::default()).unwrap();
    assert!(checks.len() >= 20);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| (c.name, &c.computed)).collect();
    assert!(failed.is_empty(), "{failed:?}");
}

#[test]
fn a_wrong_h1_weight_is_caught() {
    let opts = FixtureOptions {
        only: Some("alpha_hat".into()),
        h1_weight: Some(frac(11, 10)),
        ..FixtureOptions::default()
    };
    let checks = run_fixtures(&opts).unwrap();
    let h1 = checks.iter().find(|c| c.name == "h1.alpha_hat").unwrap();
    assert!(!h1.passed);
    assert_eq!(h1.computed, "11/5");
}
