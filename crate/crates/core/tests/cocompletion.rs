//! Cocompleteness diagnostics and the colimit lemma suite.

use rcat_core::cocheck::{check_cocompleteness_conditions, check_m_extensive, generate_diagrams, lemma_suite};
use rcat_core::fixtures;
use rcat_core::mcat::{MSystem, Par};
use rcat_core::report::CheckReport;

fn hard_failures(r: &CheckReport) -> Vec<String> {
    r.violations
        .iter()
        .map(|v| format!("{} {:?}", v.law, v.witness))
        .collect()
}

#[test]
fn inj2_with_only_isomorphisms_still_passes() {
    let (c, _) = fixtures::inj2();
    let isos = MSystem::isos(&c);
    let r = check_cocompleteness_conditions(&c, &isos, 3).unwrap();
    assert!(r.passed(), "{:?}", hard_failures(&r));
    assert!(check_m_extensive(&c, &isos, 3).unwrap().passed());
}

#[test]
fn larger_shape_bound_checks_at_least_as_much() {
    for (c, ms) in [fixtures::inj2(), fixtures::ab2()] {
        let small = check_cocompleteness_conditions(&c, &ms, 2).unwrap();
        let large = check_cocompleteness_conditions(&c, &ms, 3).unwrap();
        for (law, n) in &small.checked {
            assert!(large.checked.get(law).copied().unwrap_or(0) >= *n, "{law}");
        }
        assert!(large.violations.len() >= small.violations.len());
        assert_eq!(small.truncation.as_ref().unwrap().max_shape_objects, 2);
    }
}

#[test]
fn ab2_extensivity_fails_only_through_the_diagonal() {
    let (c, ms) = fixtures::ab2();
    let r = check_m_extensive(&c, &ms, 3).unwrap();
    assert!(!r.passed());
    assert!(r
        .violations
        .iter()
        .all(|v| v.witness.get("m").map(String::as_str) == Some("diag")));
}

#[test]
fn lemma_suite_has_no_hard_failures_on_triv3() {
    let x = fixtures::triv3();
    let c = x.cat();
    let isos = MSystem::isos(c);
    let par = Par::new(c, &isos).unwrap();
    let r = lemma_suite(&par, &generate_diagrams(c, &isos, 3).unwrap()).unwrap();
    assert!(r.passed(), "{:?}", hard_failures(&r));
}

#[test]
fn lemma_suite_has_no_hard_failures_on_inj2() {
    let (c, ms) = fixtures::inj2();
    let par = Par::new(&c, &ms).unwrap();
    let diagrams = generate_diagrams(&c, &ms, 3).unwrap();
    let r = lemma_suite(&par, &diagrams).unwrap();
    assert!(r.passed(), "{:?}", hard_failures(&r));
    assert!(r.checked.get("stability/pullback-of-colimit").copied().unwrap_or(0) > 0);
}

/// About a minute in a debug build.
#[test]
#[ignore]
fn lemma_suite_has_no_hard_failures_on_ab2() {
    let (c, ms) = fixtures::ab2();
    let par = Par::new(&c, &ms).unwrap();
    let r = lemma_suite(&par, &generate_diagrams(&c, &ms, 3).unwrap()).unwrap();
    assert!(r.passed(), "{:?}", hard_failures(&r));
    assert!(r
        .not_applicable
        .iter()
        .any(|s| s.mentions("colimit-not-preserved-in-par")));
}
