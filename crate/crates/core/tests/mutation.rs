//! Single-entry mutations of composition tables.

use rcat_core::fincat::{FinCat, MorId};
use rcat_core::fixtures;

/// Every well-typed replacement of one composite, with whether the result
/// still passes the category laws.
fn mutants(c: &FinCat) -> Vec<((MorId, MorId, MorId), FinCat, bool)> {
    let mut out = Vec::new();
    for (g, f, gf) in c.composition_entries() {
        for &h in c.hom(c.dom(f), c.cod(g)) {
            if h != gf {
                let m = c.with_entry(g, f, h);
                let survives = m.check_laws().passed();
                out.push(((g, f, h), m, survives));
            }
        }
    }
    out
}

// Unit and associativity evaluated directly on a one-object table.
fn is_monoid(c: &FinCat) -> bool {
    let e = c.id(c.objects().next().unwrap());
    let ms: Vec<MorId> = c.morphisms().collect();
    ms.iter().all(|&a| c.compose(a, e) == a && c.compose(e, a) == a)
        && ms.iter().all(|&a| {
            ms.iter().all(|&b| {
                ms.iter()
                    .all(|&d| c.compose(c.compose(a, b), d) == c.compose(a, c.compose(b, d)))
            })
        })
}

#[test]
fn every_mutation_of_multi_object_fixtures_is_caught() {
    let cats = [
        ("triv3", fixtures::triv3().cat().clone()),
        ("pfin2", fixtures::pfin2().cat().clone()),
        ("inj2", fixtures::inj2().0),
        ("ab2", fixtures::ab2().0),
    ];
    for (name, c) in cats {
        let survivors: Vec<_> = mutants(&c).into_iter().filter(|m| m.2).map(|m| m.0).collect();
        assert!(survivors.is_empty(), "{name}: {survivors:?}");
    }
}

#[test]
fn max5_mutations_survive_only_as_other_monoids() {
    let c = fixtures::max5_a().cat().clone();
    let all = mutants(&c);
    assert_eq!(all.len(), 180);
    for (entry, m, survives) in &all {
        assert_eq!(*survives, is_monoid(m), "{entry:?}");
    }
    assert_eq!(all.iter().filter(|m| m.2).count(), 17);
}

#[test]
fn max_of_two_and_three_set_to_four_is_caught() {
    let c = fixtures::max5_a().cat().clone();
    let (two, three, four) = (c.mor("2").unwrap(), c.mor("3").unwrap(), c.mor("4").unwrap());
    let r = c.with_entry(two, three, four).check_laws();
    assert!(!r.passed());
    assert!(r.violations.iter().any(|v| v.law == "associativity"));
}
