//! `M_PSh`, the classifier, and the presheaf / restriction-presheaf
//! equivalence on the bundled fixtures.

use rcat_core::equiv::{default_family, functor_f, functor_g, verify_equivalence};
use rcat_core::fincat::FinCat;
use rcat_core::fixtures;
use rcat_core::mcat::{MSystem, Par};
use rcat_core::presheaf::{
    enumerate_maps, is_mpsh_map, sigma_classifier, subfunctors, subpresheaf, yoneda, Presheaf, PresheafMap,
};
use rcat_core::rpsh::{check_family, generated_family, preserves_restriction};

/// `M_PSh` subpresheaves of `y(A)` for every `A`, with their inclusions.
fn mpsh_subs(c: &FinCat, ms: &MSystem) -> Vec<(Presheaf, Presheaf, Vec<Vec<bool>>, PresheafMap)> {
    let mut out = Vec::new();
    for a in c.objects() {
        let ya = yoneda(c, a).unwrap();
        for mask in subfunctors(c, &ya) {
            let (s, incl) = subpresheaf(c, &ya, &mask).unwrap();
            if is_mpsh_map(c, ms, &s, &ya, &incl).unwrap().report.passed() {
                out.push((ya.clone(), s, mask, incl));
            }
        }
    }
    out
}

#[test]
fn mpsh_inclusions_compose() {
    for (c, ms) in [fixtures::inj2(), fixtures::ab2()] {
        let subs = mpsh_subs(&c, &ms);
        let mut composed = 0;
        for (ya, t, t_mask, t_incl) in &subs {
            for (yb, _, s_mask, _) in &subs {
                let nested = ya == yb
                    && s_mask
                        .iter()
                        .flatten()
                        .zip(t_mask.iter().flatten())
                        .all(|(s, t)| !s || *t)
                    && s_mask != t_mask;
                if !nested {
                    continue;
                }
                // S as a subpresheaf of T, through T's inclusion.
                let rel: Vec<Vec<bool>> = c
                    .objects()
                    .map(|x| (0..t.len(x)).map(|i| s_mask[x.0][t_incl.at(x, i)]).collect())
                    .collect();
                let (s, s_in_t) = subpresheaf(&c, t, &rel).unwrap();
                if is_mpsh_map(&c, &ms, &s, t, &s_in_t).unwrap().report.passed() {
                    let composite = s_in_t.then(t_incl);
                    assert!(is_mpsh_map(&c, &ms, &s, ya, &composite).unwrap().report.passed());
                    composed += 1;
                }
            }
        }
        assert!(composed > 0);
    }
}

#[test]
fn identities_are_mpsh_maps() {
    let (c, ms) = fixtures::ab2();
    for (_, s, _, _) in mpsh_subs(&c, &ms) {
        assert!(is_mpsh_map(&c, &ms, &s, &s, &PresheafMap::identity(&s))
            .unwrap()
            .report
            .passed());
    }
}

#[test]
fn classifier_is_unique_on_every_fixture() {
    let triv = fixtures::triv3();
    let cases = [
        (triv.cat().clone(), MSystem::isos(triv.cat())),
        fixtures::inj2(),
        fixtures::ab2(),
    ];
    for (c, ms) in cases {
        let (cls, r) = sigma_classifier(&c, &ms).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        // Σ(A) has one element per subobject of A.
        for a in c.objects() {
            assert_eq!(cls.sigma.len(a), cls.subobjects[a.0].len());
        }
    }
}

#[test]
fn maps_into_sigma_from_a_representable_are_its_subobjects() {
    let (c, ms) = fixtures::inj2();
    let (cls, _) = sigma_classifier(&c, &ms).unwrap();
    for a in c.objects() {
        let ya = yoneda(&c, a).unwrap();
        assert_eq!(enumerate_maps(&c, &ya, &cls.sigma).len(), cls.sigma.len(a));
    }
}

#[test]
fn restriction_presheaf_families_pass_on_par_categories() {
    for (c, ms) in [fixtures::inj2(), fixtures::ab2()] {
        let par = Par::new(&c, &ms).unwrap();
        let fam = generated_family(par.restr()).unwrap();
        let r = check_family(par.restr(), &fam).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }
}

#[test]
fn equivalence_on_default_families() {
    let triv = fixtures::triv3();
    let cases = [
        (triv.cat().clone(), MSystem::isos(triv.cat())),
        fixtures::inj2(),
        fixtures::ab2(),
    ];
    for (c, ms) in cases {
        let par = Par::new(&c, &ms).unwrap();
        let fam = default_family(&c, &ms).unwrap();
        let w = verify_equivalence(&par, &fam).unwrap();
        assert!(w.report.passed(), "{}", w.report.to_text());
        assert!(!w.tables.is_empty());
    }
}

#[test]
fn g_after_f_preserves_sizes() {
    let (c, ms) = fixtures::inj2();
    let par = Par::new(&c, &ms).unwrap();
    for (name, p) in default_family(&c, &ms).unwrap() {
        let fp = functor_f(&par, &p).unwrap();
        let gfp = functor_g(&par, &fp.rp).unwrap();
        for a in c.objects() {
            assert_eq!(gfp.psh.len(a), p.len(a), "{name} at {}", c.obj_name(a));
        }
        // Identity maps of F(P) preserve restriction.
        assert!(preserves_restriction(
            &fp.rp,
            &fp.rp,
            &PresheafMap::identity(fp.rp.psh())
        ));
    }
}
