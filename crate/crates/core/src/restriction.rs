//! Restriction structures on finite categories.

use crate::error::{Error, Result};
use crate::fincat::{check_functor, FinCat, Functor, MorId, ObjId};
use crate::report::CheckReport;

/// A finite category with a validated restriction structure `f ↦ f̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrCat {
    cat: FinCat,
    bar: Vec<MorId>,
}

impl RestrCat {
    pub fn new(cat: FinCat, bar: Vec<MorId>) -> Result<RestrCat> {
        let report = check_restriction_structure(&cat, &bar)?;
        if report.passed() {
            Ok(RestrCat { cat, bar })
        } else {
            Err(Error::Laws(Box::new(report)))
        }
    }

    /// Every map total: `f̄ = 1`.
    pub fn trivial(cat: FinCat) -> RestrCat {
        let bar = cat.morphisms().map(|f| cat.id(cat.dom(f))).collect();
        RestrCat { cat, bar }
    }

    pub fn cat(&self) -> &FinCat {
        &self.cat
    }

    pub fn bar(&self, f: MorId) -> MorId {
        self.bar[f.0]
    }

    pub fn bars(&self) -> &[MorId] {
        &self.bar
    }

    pub fn into_parts(self) -> (FinCat, Vec<MorId>) {
        (self.cat, self.bar)
    }

    pub fn is_total(&self, f: MorId) -> bool {
        self.bar(f) == self.cat.id(self.cat.dom(f))
    }

    pub fn is_restriction_idempotent(&self, e: MorId) -> bool {
        self.bar(e) == e
    }

    /// All `e: A → A` with `ē = e`, in id order.
    pub fn restriction_idempotents(&self, a: ObjId) -> Result<Vec<MorId>> {
        self.cat.check_obj(a)?;
        Ok(self
            .cat
            .hom(a, a)
            .iter()
            .copied()
            .filter(|&e| self.is_restriction_idempotent(e))
            .collect())
    }

    /// The wide subcategory of total maps, with the original id of each map.
    pub fn total_subcategory(&self) -> Result<(FinCat, Vec<MorId>)> {
        self.cat.wide_subcategory(|f| self.is_total(f))
    }

    /// `f ≤ f'` iff `f = f' ∘ f̄`.
    pub fn leq(&self, f: MorId, f2: MorId) -> Result<bool> {
        self.cat.check_mor(f)?;
        self.cat.check_mor(f2)?;
        if !self.cat.parallel(f, f2) {
            return Err(Error::input(format!(
                "`{}` and `{}` are not parallel",
                self.cat.mor_name(f),
                self.cat.mor_name(f2)
            )));
        }
        Ok(self.cat.compose(f2, self.bar(f)) == f)
    }

    /// A retraction `r` witnessing that `m` is a restriction monic:
    /// `r ∘ m = 1` and `m ∘ r = r̄`. Least id first.
    pub fn restriction_retraction(&self, m: MorId) -> Option<MorId> {
        let c = &self.cat;
        let (a, b) = (c.dom(m), c.cod(m));
        c.hom(b, a)
            .iter()
            .copied()
            .find(|&r| c.compose(r, m) == c.id(a) && c.compose(m, r) == self.bar(r))
    }

    pub fn is_restriction_monic(&self, m: MorId) -> bool {
        self.restriction_retraction(m).is_some()
    }
}

/// Check R1–R4 exhaustively, plus the derived laws as a consistency check.
///
/// An ill-typed assignment (`f̄` not an endomorphism of `dom f`) is an input
/// error rather than a violation.
pub fn check_restriction_structure(c: &FinCat, bar: &[MorId]) -> Result<CheckReport> {
    if bar.len() != c.num_morphisms() {
        return Err(Error::input("restriction must be assigned to every morphism"));
    }
    for f in c.morphisms() {
        let b = bar[f.0];
        c.check_mor(b)?;
        if c.dom(b) != c.dom(f) || c.cod(b) != c.dom(f) {
            return Err(Error::input(format!(
                "restriction of `{}` is `{}`, not an endomorphism of its domain",
                c.mor_name(f),
                c.mor_name(b)
            )));
        }
    }
    let name = |f: MorId| c.mor_name(f).to_string();
    let b = |f: MorId| bar[f.0];
    let mut r = CheckReport::new("restriction");

    for f in c.morphisms() {
        r.expect("R1", c.compose(f, b(f)) == f, || vec![("f", name(f))]);
    }
    for a in c.objects() {
        let out: Vec<MorId> = c.objects().flat_map(|x| c.hom(a, x).iter().copied()).collect();
        for &f in &out {
            for &g in &out {
                let w = || vec![("f", name(f)), ("g", name(g))];
                r.expect("R2", c.compose(b(g), b(f)) == c.compose(b(f), b(g)), w);
                let gf = c.compose(g, b(f));
                r.expect("R3", b(gf) == c.compose(b(g), b(f)), w);
            }
        }
    }
    for f in c.morphisms() {
        for &g in c.objects().flat_map(|x| c.hom(c.cod(f), x)).collect::<Vec<_>>() {
            let lhs = c.compose(b(g), f);
            let rhs = c.compose(f, b(c.compose(g, f)));
            r.expect("R4", lhs == rhs, || vec![("f", name(f)), ("g", name(g))]);
        }
    }
    let axioms_hold = r.violations.is_empty();

    let mut d = CheckReport::new("derived");
    for f in c.morphisms() {
        let w = || vec![("f", name(f))];
        d.expect("idempotent", c.compose(b(f), b(f)) == b(f), w);
        d.expect("bar-bar", b(b(f)) == b(f), w);
        if c.is_mono(f) {
            d.expect("monic-total", b(f) == c.id(c.dom(f)), w);
        }
        for &g in c.objects().flat_map(|x| c.hom(c.cod(f), x)).collect::<Vec<_>>() {
            let gf = c.compose(g, f);
            let w = || vec![("f", name(f)), ("g", name(g))];
            d.expect("absorbs-composite", c.compose(b(f), b(gf)) == b(gf), w);
            d.expect("bar-precompose", b(c.compose(b(g), f)) == b(gf), w);
        }
    }
    for a in c.objects() {
        for x in c.objects() {
            let hom = c.hom(a, x);
            let leq = |f: MorId, g: MorId| c.compose(g, b(f)) == f;
            for &f in hom {
                d.expect("order-reflexive", leq(f, f), || vec![("f", name(f))]);
                for &g in hom {
                    if f != g {
                        d.expect("order-antisymmetric", !(leq(f, g) && leq(g, f)), || {
                            vec![("f", name(f)), ("g", name(g))]
                        });
                    }
                    if !leq(f, g) {
                        continue;
                    }
                    for &h in hom {
                        if leq(g, h) {
                            d.expect("order-transitive", leq(f, h), || {
                                vec![("f", name(f)), ("g", name(g)), ("h", name(h))]
                            });
                        }
                    }
                }
            }
        }
    }
    if axioms_hold && !d.violations.is_empty() {
        r.violation(
            "internal-consistency",
            [("detail", "axioms hold but a derived law fails")],
        );
    }
    r.absorb("derived", d);
    Ok(r.finish())
}

/// Whether `F` preserves restriction: `F(f̄) = bar(F f)` for every `f`.
pub fn check_restriction_functor(f: &Functor, x: &RestrCat, y: &RestrCat) -> Result<CheckReport> {
    let laws = check_functor(x.cat(), y.cat(), &f.omap, &f.mmap)?;
    if !laws.passed() {
        return Err(Error::input(format!(
            "not a functor: {} violation(s), first {:?}",
            laws.violations.len(),
            laws.violations[0].law
        )));
    }
    let mut r = CheckReport::new("restriction-functor");
    for g in x.cat().morphisms() {
        r.expect("preserves-restriction", f.mor(x.bar(g)) == y.bar(f.mor(g)), || {
            vec![("f", x.cat().mor_name(g).to_string())]
        });
    }
    Ok(r.finish())
}

/// A natural transformation is a restriction transformation iff its
/// components are total.
pub fn check_restriction_transformation(y: &RestrCat, components: &[MorId]) -> CheckReport {
    let mut r = CheckReport::new("restriction-transformation");
    for &c in components {
        r.expect("component-total", y.is_total(c), || {
            vec![("component", y.cat().mor_name(c).to_string())]
        });
    }
    r.finish()
}

/// Every single-entry change `f̄ := e` of the restriction table with `e` a
/// different endomorphism of `dom f`.
pub fn restriction_mutations(x: &RestrCat) -> Vec<(MorId, MorId)> {
    let c = x.cat();
    c.morphisms()
        .flat_map(|f| {
            c.hom(c.dom(f), c.dom(f))
                .iter()
                .copied()
                .filter(move |&e| e != x.bar(f))
                .map(move |e| (f, e))
        })
        .collect()
}

/// Whether the table with `f̄ := e` still satisfies R1–R4.
pub fn mutation_survives(x: &RestrCat, f: MorId, e: MorId) -> Result<bool> {
    let mut bar = x.bars().to_vec();
    bar[f.0] = e;
    Ok(check_restriction_structure(x.cat(), &bar)?.passed())
}

/// Upper bound on category size for [`enumerate_restriction_structures`].
pub const ENUMERATION_LIMIT: usize = 40;

/// Every restriction structure on `c`, found by backtracking.
pub fn enumerate_restriction_structures(c: &FinCat) -> Result<Vec<Vec<MorId>>> {
    if c.num_morphisms() > ENUMERATION_LIMIT {
        return Err(Error::precondition(format!(
            "enumeration is limited to {ENUMERATION_LIMIT} morphisms"
        )));
    }
    // Candidates satisfy R1 and are idempotent endomorphisms of the domain.
    let candidates: Vec<Vec<MorId>> = c
        .morphisms()
        .map(|f| {
            c.hom(c.dom(f), c.dom(f))
                .iter()
                .copied()
                .filter(|&e| c.compose(e, e) == e && c.compose(f, e) == f)
                .collect()
        })
        .collect();
    let mut bar = vec![None; c.num_morphisms()];
    let mut out = Vec::new();
    search(c, &candidates, 0, &mut bar, &mut out);
    Ok(out)
}

fn search(c: &FinCat, candidates: &[Vec<MorId>], k: usize, bar: &mut Vec<Option<MorId>>, out: &mut Vec<Vec<MorId>>) {
    if k == bar.len() {
        let full: Vec<MorId> = bar.iter().map(|b| b.expect("assigned")).collect();
        if check_restriction_structure(c, &full)
            .map(|r| r.passed())
            .unwrap_or(false)
        {
            out.push(full);
        }
        return;
    }
    for &e in &candidates[k] {
        bar[k] = Some(e);
        if partial_consistent(c, bar, MorId(k)) {
            search(c, candidates, k + 1, bar, out);
        }
    }
    bar[k] = None;
}

// Checks every R2–R4 instance involving `f` whose values are all assigned.
fn partial_consistent(c: &FinCat, bar: &[Option<MorId>], f: MorId) -> bool {
    let b = |g: MorId| bar[g.0];
    let bf = b(f).expect("just assigned");
    for g in c.morphisms() {
        let Some(bg) = b(g) else { continue };
        if c.dom(g) == c.dom(f) {
            if c.compose(bg, bf) != c.compose(bf, bg) {
                return false;
            }
            // R3 in both orientations.
            for (x, bx, by) in [(g, bg, bf), (f, bf, bg)] {
                if let Some(bxy) = b(c.compose(x, by)) {
                    if bxy != c.compose(bx, by) {
                        return false;
                    }
                }
            }
        }
        // R4 with `f` in either position.
        for (first, second) in [(f, g), (g, f)] {
            if c.cod(first) == c.dom(second) {
                let comp = c.compose(second, first);
                if let (Some(bs), Some(bc)) = (b(second), b(comp)) {
                    if c.compose(bs, first) != c.compose(first, bc) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_structures_pass() {
        for x in [
            fixtures::triv3(),
            fixtures::max5_a(),
            fixtures::max5_b(),
            fixtures::pfin2(),
        ] {
            let r = check_restriction_structure(x.cat(), x.bars()).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn single_entry_mutations_of_max5b() {
        let x = fixtures::max5_b();
        let m = |n: &str| x.cat().mor(n).unwrap();
        let mutate = |at: &str, to: &str| mutation_survives(&x, m(at), m(to)).unwrap();
        assert!(!mutate("3", "1"));
        assert!(!mutate("2", "0"));
        // These three are themselves restriction structures.
        assert!(mutate("2", "2"));
        assert!(mutate("4", "4"));
        assert!(mutate("5", "3"));
        assert_eq!(restriction_mutations(&x).len(), 30);
    }

    #[test]
    fn ill_typed_bar_is_input_error() {
        let (c, _) = fixtures::inj2();
        let f = c.mor("{1}->{1,2}[1]").unwrap();
        let bar: Vec<MorId> = c.morphisms().map(|_| f).collect();
        assert!(check_restriction_structure(&c, &bar).unwrap_err().is_input_error());
    }

    #[test]
    fn idempotents_and_totals() {
        let b = fixtures::max5_b();
        let star = b.cat().obj("*").unwrap();
        let names: Vec<&str> = b
            .restriction_idempotents(star)
            .unwrap()
            .into_iter()
            .map(|e| b.cat().mor_name(e))
            .collect();
        assert_eq!(names, ["0", "1", "3", "5"]);
        let (total, _) = b.total_subcategory().unwrap();
        assert_eq!(total.num_morphisms(), 1);

        let p = fixtures::pfin2();
        let top = p.cat().obj("{1,2}").unwrap();
        assert_eq!(p.restriction_idempotents(top).unwrap().len(), 4);
        let (total, _) = p.total_subcategory().unwrap();
        assert_eq!(total.num_morphisms(), 18);

        let t = fixtures::triv3();
        assert_eq!(t.total_subcategory().unwrap().0, t.cat().clone());
    }

    #[test]
    fn order_examples() {
        let b = fixtures::max5_b();
        let (three, four) = (b.cat().mor("3").unwrap(), b.cat().mor("4").unwrap());
        assert!(!b.leq(four, three).unwrap());
        assert!(b.leq(four, four).unwrap());
        let p = fixtures::pfin2();
        let empty = p.cat().mor("{1,2}->{1}[--]").unwrap();
        for &g in p.cat().hom(p.cat().dom(empty), p.cat().cod(empty)) {
            assert!(p.leq(empty, g).unwrap());
        }
    }

    #[test]
    fn restriction_functors() {
        let p = fixtures::pfin2();
        let id = Functor::identity(p.cat());
        assert!(check_restriction_functor(&id, &p, &p).unwrap().passed());
        let (a, b) = (fixtures::max5_b(), fixtures::max5_a());
        let id = Functor::identity(a.cat());
        let r = check_restriction_functor(&id, &a, &b).unwrap();
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.mentions("2")));
    }

    #[test]
    fn enumeration_finds_both_max5_structures() {
        let x = fixtures::max5_a();
        let all = enumerate_restriction_structures(x.cat()).unwrap();
        assert!(all.contains(&fixtures::max5_a().bars().to_vec()));
        assert!(all.contains(&fixtures::max5_b().bars().to_vec()));
        for bar in &all {
            assert!(check_restriction_structure(x.cat(), bar).unwrap().passed());
        }
    }
}
