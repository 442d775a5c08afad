//! Splitting restriction idempotents: the `Kr` construction and its unit `J`.

use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor, MorId, ObjId};
use crate::restriction::{check_restriction_functor, RestrCat};

/// `(m, r)` with `m ∘ r = e` and `r ∘ m = 1`, least in lexicographic id order.
pub fn split_restriction_idempotent(x: &RestrCat, e: MorId) -> Result<Option<(MorId, MorId)>> {
    let c = x.cat();
    c.check_mor(e)?;
    if !x.is_restriction_idempotent(e) {
        return Err(Error::precondition(format!(
            "`{}` is not a restriction idempotent",
            c.mor_name(e)
        )));
    }
    let a = c.dom(e);
    let mut best = None;
    for b in c.objects() {
        for &m in c.hom(b, a) {
            for &r in c.hom(a, b) {
                let splits = c.compose(m, r) == e && c.compose(r, m) == c.id(b);
                if splits && best.is_none_or(|prev| (m, r) < prev) {
                    best = Some((m, r));
                }
            }
        }
    }
    Ok(best)
}

/// The first restriction idempotent (by id) that does not split, if any.
pub fn first_unsplit(x: &RestrCat) -> Option<MorId> {
    x.cat()
        .morphisms()
        .filter(|&e| x.is_restriction_idempotent(e))
        .find(|&e| matches!(split_restriction_idempotent(x, e), Ok(None)))
}

pub fn is_split(x: &RestrCat) -> bool {
    first_unsplit(x).is_none()
}

/// `Kr(X)` with the embedding `J: X → Kr(X)`.
#[derive(Debug, Clone)]
pub struct KrCat {
    pub result: RestrCat,
    pub j: Functor,
    /// For each object of the result, its `(A, e)` pair in the base.
    pub pairs: Vec<(ObjId, MorId)>,
    /// For each morphism of the result, the underlying base morphism.
    pub underlying: Vec<MorId>,
}

impl KrCat {
    /// The object `(A, e)`.
    pub fn object(&self, a: ObjId, e: MorId) -> Option<ObjId> {
        self.pairs.iter().position(|&p| p == (a, e)).map(ObjId)
    }

    /// The morphism `f: (A,e) → (A',e')`, if `e' f e = f`.
    pub fn morphism(&self, src: ObjId, f: MorId, dst: ObjId) -> Option<MorId> {
        let c = self.result.cat();
        c.hom(src, dst).iter().copied().find(|&g| self.underlying[g.0] == f)
    }
}

/// Build `Kr(X)`: objects `A|e` ordered by `A` then `e`; morphisms named
/// `(src)f(dst)`, grouped by source, target, then base id.
pub fn kr(x: &RestrCat) -> Result<KrCat> {
    let c = x.cat();
    let mut pairs = Vec::new();
    for a in c.objects() {
        for e in x.restriction_idempotents(a)? {
            pairs.push((a, e));
        }
    }
    let obj_name = |(a, e): (ObjId, MorId)| format!("{}|{}", c.obj_name(a), c.mor_name(e));
    let mut morphisms = Vec::new();
    let mut underlying = Vec::new();
    for (si, &(a, e)) in pairs.iter().enumerate() {
        for (ti, &(a2, e2)) in pairs.iter().enumerate() {
            for &f in c.hom(a, a2) {
                if c.compose(e2, c.compose(f, e)) == f {
                    morphisms.push((
                        format!("({}){}({})", obj_name((a, e)), c.mor_name(f), obj_name((a2, e2))),
                        ObjId(si),
                        ObjId(ti),
                    ));
                    underlying.push(f);
                }
            }
        }
    }
    let find = |s: ObjId, f: MorId, t: ObjId| -> MorId {
        let idx = morphisms
            .iter()
            .zip(&underlying)
            .position(|((_, ms, mt), &u)| *ms == s && *mt == t && u == f)
            .expect("composite satisfies the fixing condition");
        MorId(idx)
    };
    let identities: Vec<MorId> = pairs
        .iter()
        .enumerate()
        .map(|(i, &(_, e))| find(ObjId(i), e, ObjId(i)))
        .collect();
    let names: Vec<String> = pairs.iter().map(|&p| obj_name(p)).collect();
    let cat = FinCat::from_fn(names, morphisms.clone(), identities, |g, f| {
        find(
            morphisms[f.0].1,
            c.compose(underlying[g.0], underlying[f.0]),
            morphisms[g.0].2,
        )
    })?;
    let bar: Vec<MorId> = cat
        .morphisms()
        .map(|f| {
            let s = cat.dom(f);
            find(s, x.bar(underlying[f.0]), s)
        })
        .collect();
    let result = RestrCat::new(cat, bar)?;
    let omap: Vec<ObjId> = c
        .objects()
        .map(|a| {
            let i = pairs
                .iter()
                .position(|&p| p == (a, c.id(a)))
                .expect("identity is a restriction idempotent");
            ObjId(i)
        })
        .collect();
    let mmap: Vec<MorId> = c
        .morphisms()
        .map(|f| find(omap[c.dom(f).0], f, omap[c.cod(f).0]))
        .collect();
    let j = Functor::new(c, result.cat(), omap, mmap)?;
    let kr = KrCat {
        result,
        j,
        pairs,
        underlying,
    };
    let jr = check_restriction_functor(&kr.j, x, &kr.result)?;
    if !jr.passed() || !kr.j.is_injective_on_objects() || !kr.j.is_fully_faithful(c, kr.result.cat()) {
        return Err(Error::internal("J is not a fully faithful restriction embedding"));
    }
    Ok(kr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn kr_sizes() {
        let k = kr(&fixtures::max5_b()).unwrap();
        assert_eq!(k.result.cat().num_objects(), 4);
        assert_eq!(k.result.cat().num_morphisms(), 43);
        let names: Vec<&str> = k.result.cat().objects().map(|o| k.result.cat().obj_name(o)).collect();
        assert_eq!(names, ["*|0", "*|1", "*|3", "*|5"]);

        let t = kr(&fixtures::triv3()).unwrap();
        assert_eq!(t.result.cat().num_morphisms(), 3);

        let p = kr(&fixtures::pfin2()).unwrap();
        assert_eq!(p.result.cat().num_objects(), 1 + 2 + 2 + 4);
    }

    #[test]
    fn kr_hom_counts_match_filter() {
        let x = fixtures::max5_b();
        let k = kr(&x).unwrap();
        let c = k.result.cat();
        for s in c.objects() {
            for t in c.objects() {
                let (e, e2) = (k.pairs[s.0].1 .0, k.pairs[t.0].1 .0);
                let expected = (0..6).filter(|&n| n.max(e).max(e2) == n).count();
                assert_eq!(c.hom(s, t).len(), expected);
            }
        }
    }

    #[test]
    fn splittings() {
        let p = fixtures::pfin2();
        let c = p.cat();
        let top = c.obj("{1,2}").unwrap();
        let (m, r) = split_restriction_idempotent(&p, c.id(top)).unwrap().unwrap();
        assert_eq!(c.compose(m, r), c.id(top));
        let e = c.mor("{1,2}->{1,2}[1-]").unwrap();
        let (m, r) = split_restriction_idempotent(&p, e).unwrap().unwrap();
        assert_eq!(c.mor_name(m), "{1}->{1,2}[1]");
        assert_eq!(c.mor_name(r), "{1,2}->{1}[1-]");
        assert!(is_split(&p));

        let b = fixtures::max5_b();
        let one = b.cat().mor("1").unwrap();
        assert_eq!(split_restriction_idempotent(&b, one).unwrap(), None);
        assert!(!is_split(&b));
        assert!(split_restriction_idempotent(&b, b.cat().mor("2").unwrap()).is_err());
    }

    #[test]
    fn kr_is_split_and_splits_canonically() {
        for x in [
            fixtures::triv3(),
            fixtures::max5_a(),
            fixtures::max5_b(),
            fixtures::pfin2(),
        ] {
            let k = kr(&x).unwrap();
            assert!(is_split(&k.result));
            let kc = k.result.cat();
            for (i, &(a, e)) in k.pairs.iter().enumerate() {
                let top = k.object(a, x.cat().id(a)).unwrap();
                let here = ObjId(i);
                let m = k.morphism(here, e, top).unwrap();
                let r = k.morphism(top, e, here).unwrap();
                assert_eq!(kc.compose(r, m), kc.id(here));
                assert_eq!(kc.compose(m, r), k.morphism(top, e, top).unwrap());
            }
        }
    }
}
