//! Randomized law checks over the bundled fixtures.

use proptest::prelude::*;

use rcat_core::fincat::{FinCat, MorId};
use rcat_core::fixtures;
use rcat_core::format::CategoryFile;
use rcat_core::mcat::{pull_back_subobject, Par};
use rcat_core::restriction::{check_restriction_structure, RestrCat};
use rcat_core::splitting::{kr, split_restriction_idempotent};

fn mor(c: &FinCat) -> impl Strategy<Value = MorId> {
    (0..c.num_morphisms()).prop_map(MorId)
}

/// A composable pair `(g, f)`, chosen as `f` and then any `g` out of `cod f`.
fn composable(c: &FinCat) -> impl Strategy<Value = (MorId, MorId)> {
    let c = c.clone();
    mor(&c).prop_flat_map(move |f| {
        let outs: Vec<MorId> = c.morphisms().filter(|&g| c.dom(g) == c.cod(f)).collect();
        (proptest::sample::select(outs), Just(f))
    })
}

fn max_monoid_is_restriction(bar: &[usize]) -> bool {
    let n = bar.len();
    (0..n).all(|f| {
        f.max(bar[f]) == f
            && (0..n).all(|g| bar[g.max(bar[f])] == bar[g].max(bar[f]) && bar[g].max(f) == f.max(bar[g.max(f)]))
    })
}

fn pfin2() -> RestrCat {
    fixtures::pfin2()
}

proptest! {
    #[test]
    fn random_bar_on_max_monoid_matches_oracle(bar in proptest::collection::vec(0..6usize, 6)) {
        let c = fixtures::max5_a().cat().clone();
        let ids: Vec<MorId> = bar.iter().map(|&b| MorId(b)).collect();
        let r = check_restriction_structure(&c, &ids).unwrap();
        prop_assert_eq!(r.passed(), max_monoid_is_restriction(&bar));
    }

    #[test]
    fn restriction_is_below_identity_and_composites((g, f) in composable(pfin2().cat())) {
        let x = pfin2();
        let c = x.cat();
        let gf = c.compose(g, f);
        prop_assert!(x.leq(x.bar(f), c.id(c.dom(f))).unwrap());
        prop_assert!(x.leq(x.bar(gf), x.bar(f)).unwrap());
        prop_assert_eq!(c.compose(x.bar(g), f), c.compose(f, x.bar(gf)));
    }

    #[test]
    fn restriction_idempotents_split_in_kr(f in mor(pfin2().cat())) {
        let x = pfin2();
        let k = kr(&x).unwrap();
        let e = k.j.mor(x.bar(f));
        let (m, r) = split_restriction_idempotent(&k.result, e).unwrap().expect("kr is split");
        let kc = k.result.cat();
        prop_assert_eq!(kc.compose(m, r), e);
        prop_assert_eq!(kc.compose(r, m), kc.id(kc.dom(m)));
        prop_assert!(k.result.is_restriction_monic(m));
    }

    #[test]
    fn members_pull_back_to_members(f in mor(&fixtures::inj2().0), m in mor(&fixtures::inj2().0)) {
        let (c, ms) = fixtures::inj2();
        prop_assume!(ms.contains(m) && c.cod(f) == c.cod(m));
        let p = pull_back_subobject(&c, f, m).unwrap();
        prop_assert!(ms.contains(p));
        prop_assert_eq!(c.cod(p), c.dom(f));
    }

    #[test]
    fn par_composition_is_span_composition((g, f) in composable(Par::new(&fixtures::inj2().0, &fixtures::inj2().1).unwrap().cat())) {
        let (c, ms) = fixtures::inj2();
        let par = Par::new(&c, &ms).unwrap();
        let (sf, sg) = (par.span(f), par.span(g));
        // (n, g) ∘ (m, f) = (m ∘ p, g ∘ q) where f ∘ p = n ∘ q.
        let sq = c.pullback(sf.f, sg.m).unwrap().expect("members pull back");
        let expected = par.class_of(c.compose(sf.m, sq.p), c.compose(sg.f, sq.q)).unwrap();
        prop_assert_eq!(par.cat().compose(g, f), expected);
    }

    #[test]
    fn category_files_round_trip(f in mor(fixtures::max5_b().cat()), e in 0..6usize) {
        let x = fixtures::max5_b();
        let c = x.cat();
        let mut bars = x.bars().to_vec();
        bars[f.0] = MorId(e);
        let mut file = CategoryFile::from_restr(&x);
        file.restriction.as_mut().unwrap().insert(c.mor_name(f).to_string(), c.mor_name(MorId(e)).to_string());
        let back = CategoryFile::parse(&file.to_json()).unwrap();
        prop_assert_eq!(&back, &file);
        let direct = check_restriction_structure(c, &bars).unwrap().passed();
        prop_assert_eq!(back.check().unwrap().passed(), direct);
    }
}
