use super::{FinCat, MorId, ObjId};
use crate::error::{Error, Result};
use crate::report::CheckReport;

/// A functor between finite categories, as object and morphism maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub omap: Vec<ObjId>,
    pub mmap: Vec<MorId>,
}

impl Functor {
    /// Validate against source and target; fails with the law report.
    pub fn new(src: &FinCat, tgt: &FinCat, omap: Vec<ObjId>, mmap: Vec<MorId>) -> Result<Functor> {
        let report = check_functor(src, tgt, &omap, &mmap)?;
        if report.passed() {
            Ok(Functor { omap, mmap })
        } else {
            Err(Error::Laws(Box::new(report)))
        }
    }

    pub fn identity(c: &FinCat) -> Functor {
        Functor {
            omap: c.objects().collect(),
            mmap: c.morphisms().collect(),
        }
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Functor) -> Functor {
        Functor {
            omap: self.omap.iter().map(|o| then.omap[o.0]).collect(),
            mmap: self.mmap.iter().map(|f| then.mmap[f.0]).collect(),
        }
    }

    pub fn obj(&self, a: ObjId) -> ObjId {
        self.omap[a.0]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.mmap[f.0]
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut v = self.omap.clone();
        v.sort();
        v.dedup();
        v.len() == self.omap.len()
    }

    /// Whether every `hom(A, B) → hom(FA, FB)` is a bijection.
    pub fn is_fully_faithful(&self, src: &FinCat, tgt: &FinCat) -> bool {
        src.objects().all(|a| {
            src.objects().all(|b| {
                let mut image: Vec<MorId> = src.hom(a, b).iter().map(|&f| self.mor(f)).collect();
                image.sort();
                image.dedup();
                image.len() == src.hom(a, b).len() && image.len() == tgt.hom(self.obj(a), self.obj(b)).len()
            })
        })
    }
}

/// Exhaustive functor-law check. Size mismatches are input errors.
pub fn check_functor(src: &FinCat, tgt: &FinCat, omap: &[ObjId], mmap: &[MorId]) -> Result<CheckReport> {
    if omap.len() != src.num_objects() || mmap.len() != src.num_morphisms() {
        return Err(Error::input("functor maps do not cover the source category"));
    }
    for &o in omap {
        tgt.check_obj(o)?;
    }
    for &f in mmap {
        tgt.check_mor(f)?;
    }
    let mut r = CheckReport::new("functor");
    for f in src.morphisms() {
        let ff = mmap[f.0];
        r.expect(
            "preserves-type",
            tgt.dom(ff) == omap[src.dom(f).0] && tgt.cod(ff) == omap[src.cod(f).0],
            || vec![("f", src.mor_name(f).to_string())],
        );
    }
    for a in src.objects() {
        r.expect("preserves-identity", mmap[src.id(a).0] == tgt.id(omap[a.0]), || {
            vec![("object", src.obj_name(a).to_string())]
        });
    }
    if !r.violations.is_empty() {
        return Ok(r.finish());
    }
    for (g, f, gf) in src.composition_entries() {
        r.expect(
            "preserves-composition",
            tgt.compose(mmap[g.0], mmap[f.0]) == mmap[gf.0],
            || vec![("g", src.mor_name(g).to_string()), ("f", src.mor_name(f).to_string())],
        );
    }
    Ok(r.finish())
}

/// A natural transformation `F ⇒ G` given by its components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    pub components: Vec<MorId>,
}

impl NatTrans {
    pub fn new(src: &FinCat, tgt: &FinCat, from: &Functor, to: &Functor, components: Vec<MorId>) -> Result<NatTrans> {
        let report = check_nat_trans(src, tgt, from, to, &components)?;
        if report.passed() {
            Ok(NatTrans { components })
        } else {
            Err(Error::Laws(Box::new(report)))
        }
    }

    pub fn identity(tgt: &FinCat, f: &Functor) -> NatTrans {
        NatTrans {
            components: f.omap.iter().map(|&o| tgt.id(o)).collect(),
        }
    }

    pub fn at(&self, a: ObjId) -> MorId {
        self.components[a.0]
    }
}

pub fn check_nat_trans(
    src: &FinCat,
    tgt: &FinCat,
    from: &Functor,
    to: &Functor,
    components: &[MorId],
) -> Result<CheckReport> {
    if components.len() != src.num_objects() {
        return Err(Error::input("one component per source object is required"));
    }
    let mut r = CheckReport::new("natural-transformation");
    for a in src.objects() {
        let c = components[a.0];
        tgt.check_mor(c)?;
        r.expect(
            "component-type",
            tgt.dom(c) == from.obj(a) && tgt.cod(c) == to.obj(a),
            || vec![("object", src.obj_name(a).to_string())],
        );
    }
    if !r.violations.is_empty() {
        return Ok(r.finish());
    }
    for f in src.morphisms() {
        let (a, b) = (src.dom(f), src.cod(f));
        let lhs = tgt.compose(components[b.0], from.mor(f));
        let rhs = tgt.compose(to.mor(f), components[a.0]);
        r.expect("naturality", lhs == rhs, || vec![("f", src.mor_name(f).to_string())]);
    }
    Ok(r.finish())
}
