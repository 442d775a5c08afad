//! Finite categories given by an explicit composition table.
//!
//! Objects and morphisms are addressed by dense indices ([`ObjId`],
//! [`MorId`]) in the order they were listed. That order is what "least id"
//! means everywhere a canonical choice is made.

mod functor;
mod limits;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::CheckReport;

pub use functor::{check_functor, check_nat_trans, Functor, NatTrans};
pub use limits::{Cone, Diagram, PullbackSquare};

/// Object names, `(name, dom, cod)` per morphism, and identities.
pub type Parts = (Vec<String>, Vec<(String, ObjId, ObjId)>, Vec<MorId>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ObjId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MorId(pub usize);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// A finite category. Once built through [`FinCat::from_fn`] or
/// [`FinCat::from_table`] the category laws are known to hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    /// `table[g * m + f]` is `g ∘ f`.
    table: Vec<Option<MorId>>,
    homs: Vec<Vec<MorId>>,
    obj_index: HashMap<String, ObjId>,
    mor_index: HashMap<String, MorId>,
}

impl FinCat {
    /// Build a category whose composition is computed by `compose(g, f)` on
    /// every composable pair, then check the laws.
    pub fn from_fn<F>(
        objects: Vec<String>,
        morphisms: Vec<(String, ObjId, ObjId)>,
        identities: Vec<MorId>,
        mut compose: F,
    ) -> Result<FinCat>
    where
        F: FnMut(MorId, MorId) -> MorId,
    {
        let mut entries = Vec::new();
        for (gi, g) in morphisms.iter().enumerate() {
            for (fi, f) in morphisms.iter().enumerate() {
                if f.2 == g.1 {
                    let (g, f) = (MorId(gi), MorId(fi));
                    entries.push((g, f, compose(g, f)));
                }
            }
        }
        let cat = FinCat::assemble(objects, morphisms, identities, entries)?;
        cat.validated()
    }

    /// Build from explicit `(g, f, g∘f)` triples and check the laws.
    pub fn from_table(
        objects: Vec<String>,
        morphisms: Vec<(String, ObjId, ObjId)>,
        identities: Vec<MorId>,
        composition: Vec<(MorId, MorId, MorId)>,
    ) -> Result<FinCat> {
        FinCat::assemble(objects, morphisms, identities, composition)?.validated()
    }

    fn validated(self) -> Result<FinCat> {
        let report = self.check_laws();
        if report.passed() {
            Ok(self)
        } else {
            Err(Error::Laws(Box::new(report)))
        }
    }

    /// Structural validation only (names, references); laws are not checked.
    pub(crate) fn assemble(
        objects: Vec<String>,
        morphisms: Vec<(String, ObjId, ObjId)>,
        identities: Vec<MorId>,
        composition: Vec<(MorId, MorId, MorId)>,
    ) -> Result<FinCat> {
        let mut obj_index = HashMap::new();
        for (i, name) in objects.iter().enumerate() {
            if obj_index.insert(name.clone(), ObjId(i)).is_some() {
                return Err(Error::input(format!("duplicate object id `{name}`")));
            }
        }
        let n = objects.len();
        let mut mor_index = HashMap::new();
        let mut mors = Vec::with_capacity(morphisms.len());
        for (i, (name, dom, cod)) in morphisms.into_iter().enumerate() {
            if dom.0 >= n || cod.0 >= n {
                return Err(Error::input(format!("morphism `{name}` has a dangling endpoint")));
            }
            if mor_index.insert(name.clone(), MorId(i)).is_some() {
                return Err(Error::input(format!("duplicate morphism id `{name}`")));
            }
            mors.push(Morphism { name, dom, cod });
        }
        let m = mors.len();
        if identities.len() != n {
            return Err(Error::input(format!(
                "expected {n} identities, got {}",
                identities.len()
            )));
        }
        if let Some(bad) = identities.iter().find(|i| i.0 >= m) {
            return Err(Error::input(format!("identity {bad} is not a morphism")));
        }
        let mut table = vec![None; m * m];
        for (g, f, gf) in composition {
            if g.0 >= m || f.0 >= m || gf.0 >= m {
                return Err(Error::input("composition entry references an unknown morphism"));
            }
            let slot = &mut table[g.0 * m + f.0];
            if slot.is_some() {
                return Err(Error::input(format!(
                    "composition of ({}, {}) listed twice",
                    mors[g.0].name, mors[f.0].name
                )));
            }
            *slot = Some(gf);
        }
        let mut homs = vec![Vec::new(); n * n];
        for (i, mor) in mors.iter().enumerate() {
            homs[mor.dom.0 * n + mor.cod.0].push(MorId(i));
        }
        Ok(FinCat {
            objects,
            morphisms: mors,
            identities,
            table,
            homs,
            obj_index,
            mor_index,
        })
    }

    /// Exhaustive check of the category laws on the stored table.
    pub fn check_laws(&self) -> CheckReport {
        let mut r = CheckReport::new("category");
        let m = self.morphisms.len();
        for (a, &id) in self.identities.iter().enumerate() {
            let mor = &self.morphisms[id.0];
            r.expect("identity-type", mor.dom.0 == a && mor.cod.0 == a, || {
                vec![("object", self.objects[a].clone()), ("identity", mor.name.clone())]
            });
        }
        for g in 0..m {
            for f in 0..m {
                let composable = self.morphisms[f].cod == self.morphisms[g].dom;
                let w = || {
                    vec![
                        ("g", self.morphisms[g].name.clone()),
                        ("f", self.morphisms[f].name.clone()),
                    ]
                };
                match (composable, self.table[g * m + f]) {
                    (true, None) => r.violation("composite-missing", w()),
                    (false, Some(_)) => r.violation("composite-not-composable", w()),
                    (true, Some(gf)) => {
                        let ok = self.morphisms[gf.0].dom == self.morphisms[f].dom
                            && self.morphisms[gf.0].cod == self.morphisms[g].cod;
                        r.expect("composite-type", ok, w);
                    }
                    (false, None) => {}
                }
            }
        }
        if !r.violations.is_empty() {
            // Identity and associativity checks need a well-typed table.
            return r.finish();
        }
        for f in 0..m {
            let mor = &self.morphisms[f];
            let left = self.identities[mor.cod.0];
            let right = self.identities[mor.dom.0];
            let w = || vec![("f", mor.name.clone())];
            r.expect("left-identity", self.table[left.0 * m + f] == Some(MorId(f)), w);
            r.expect("right-identity", self.table[f * m + right.0] == Some(MorId(f)), w);
        }
        for f in 0..m {
            for &g in self.hom_from(self.morphisms[f].cod) {
                let gf = self.table[g.0 * m + f].expect("typed");
                for &h in self.hom_from(self.morphisms[g.0].cod) {
                    let hg = self.table[h.0 * m + g.0].expect("typed");
                    let lhs = self.table[h.0 * m + gf.0];
                    let rhs = self.table[hg.0 * m + f];
                    r.expect("associativity", lhs == rhs, || {
                        vec![
                            ("h", self.morphisms[h.0].name.clone()),
                            ("g", self.morphisms[g.0].name.clone()),
                            ("f", self.morphisms[f].name.clone()),
                        ]
                    });
                }
            }
        }
        r.finish()
    }

    // Iterates every morphism out of `a`, across all codomains.
    fn hom_from(&self, a: ObjId) -> impl Iterator<Item = &MorId> + '_ {
        let n = self.objects.len();
        (0..n).flat_map(move |b| self.homs[a.0 * n + b].iter())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + Clone {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + Clone {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn obj_name(&self, a: ObjId) -> &str {
        &self.objects[a.0]
    }

    pub fn mor_name(&self, f: MorId) -> &str {
        &self.morphisms[f.0].name
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f.0]
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].dom
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].cod
    }

    pub fn id(&self, a: ObjId) -> MorId {
        self.identities[a.0]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.dom(f).0] == f
    }

    pub fn obj(&self, name: &str) -> Result<ObjId> {
        self.obj_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn mor(&self, name: &str) -> Result<MorId> {
        self.mor_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub(crate) fn check_obj(&self, a: ObjId) -> Result<()> {
        if a.0 < self.objects.len() {
            Ok(())
        } else {
            Err(Error::UnknownObject(a.to_string()))
        }
    }

    pub(crate) fn check_mor(&self, f: MorId) -> Result<()> {
        if f.0 < self.morphisms.len() {
            Ok(())
        } else {
            Err(Error::UnknownMorphism(f.to_string()))
        }
    }

    /// `g ∘ f`, or `None` when `cod f ≠ dom g`.
    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.table[g.0 * self.morphisms.len() + f.0]
    }

    /// `g ∘ f`.
    ///
    /// # Panics
    /// If the pair is not composable.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("`{}` ∘ `{}` is not composable", self.mor_name(g), self.mor_name(f)))
    }

    /// Composite of a path given in application order: `[f, g, h]` is `h∘g∘f`.
    pub fn compose_path(&self, path: &[MorId]) -> MorId {
        let (first, rest) = path.split_first().expect("non-empty path");
        rest.iter().fold(*first, |acc, &next| self.compose(next, acc))
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a.0 * self.objects.len() + b.0]
    }

    /// All morphisms with codomain `b`, ordered by id.
    pub fn into_obj(&self, b: ObjId) -> Vec<MorId> {
        let mut v: Vec<MorId> = self.objects().flat_map(|a| self.hom(a, b).iter().copied()).collect();
        v.sort();
        v
    }

    pub fn parallel(&self, f: MorId, g: MorId) -> bool {
        self.dom(f) == self.dom(g) && self.cod(f) == self.cod(g)
    }

    /// Exhaustive left-cancellation test.
    pub fn is_mono(&self, f: MorId) -> bool {
        let (a, _) = (self.dom(f), self.cod(f));
        self.objects().all(|x| {
            let mut seen = HashSet::new();
            self.hom(x, a).iter().all(|&g| seen.insert(self.compose(f, g)))
        })
    }

    /// Exhaustive right-cancellation test.
    pub fn is_epi(&self, f: MorId) -> bool {
        let b = self.cod(f);
        self.objects().all(|x| {
            let mut seen = HashSet::new();
            self.hom(b, x).iter().all(|&g| seen.insert(self.compose(g, f)))
        })
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.compose(g, f) == self.id(a) && self.compose(f, g) == self.id(b))
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    pub fn isos(&self, a: ObjId, b: ObjId) -> Vec<MorId> {
        self.hom(a, b).iter().copied().filter(|&f| self.is_iso(f)).collect()
    }

    pub fn is_idempotent(&self, e: MorId) -> bool {
        self.dom(e) == self.cod(e) && self.compose(e, e) == e
    }

    /// Composite table entries `(g, f, g∘f)` over composable pairs, in id order.
    pub fn composition_entries(&self) -> Vec<(MorId, MorId, MorId)> {
        let m = self.morphisms.len();
        let mut out = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if let Some(gf) = self.table[g * m + f] {
                    out.push((MorId(g), MorId(f), gf));
                }
            }
        }
        out
    }

    /// A copy with the single table entry `g ∘ f` replaced by `to`. The
    /// result is not validated; run [`FinCat::check_laws`] on it.
    pub fn with_entry(&self, g: MorId, f: MorId, to: MorId) -> FinCat {
        let mut out = self.clone();
        let m = out.morphisms.len();
        out.table[g.0 * m + f.0] = Some(to);
        out
    }

    /// The data needed to rebuild this category, e.g. for mutation.
    pub fn parts(&self) -> Parts {
        (
            self.objects.clone(),
            self.morphisms.iter().map(|m| (m.name.clone(), m.dom, m.cod)).collect(),
            self.identities.clone(),
        )
    }

    /// The full subcategory-style restriction to a set of morphisms closed
    /// under composition and containing all identities. Returns the
    /// subcategory and, for each of its morphisms, the original id.
    pub fn wide_subcategory(&self, keep: impl Fn(MorId) -> bool) -> Result<(FinCat, Vec<MorId>)> {
        let kept: Vec<MorId> = self.morphisms().filter(|&f| keep(f)).collect();
        let mut local = HashMap::new();
        for (i, &f) in kept.iter().enumerate() {
            local.insert(f, MorId(i));
        }
        let morphisms = kept
            .iter()
            .map(|&f| (self.mor_name(f).to_string(), self.dom(f), self.cod(f)))
            .collect();
        let mut identities = Vec::new();
        for a in self.objects() {
            let id = local
                .get(&self.id(a))
                .copied()
                .ok_or_else(|| Error::internal(format!("subcategory drops the identity on `{}`", self.obj_name(a))))?;
            identities.push(id);
        }
        let mut missing = None;
        let sub = FinCat::from_fn(self.objects.clone(), morphisms, identities, |g, f| {
            let gf = self.compose(kept[g.0], kept[f.0]);
            match local.get(&gf) {
                Some(&x) => x,
                None => {
                    missing = Some((kept[g.0], kept[f.0]));
                    MorId(0)
                }
            }
        });
        if let Some((g, f)) = missing {
            return Err(Error::internal(format!(
                "subcategory not closed under composition at `{}` ∘ `{}`",
                self.mor_name(g),
                self.mor_name(f)
            )));
        }
        Ok((sub?, kept))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_are_categories() {
        for cat in [
            fixtures::triv3().cat().clone(),
            fixtures::max5_a().cat().clone(),
            fixtures::pfin2().cat().clone(),
            fixtures::inj2().0,
            fixtures::ab2().0,
        ] {
            assert!(cat.check_laws().passed());
        }
    }

    #[test]
    fn monos_in_inj2() {
        let (c, _) = fixtures::inj2();
        let incl = c.mor("{1}->{1,2}[1]").unwrap();
        let constant = c.mor("{1,2}->{1}[11]").unwrap();
        assert!(c.is_mono(c.id(c.obj("{1,2}").unwrap())));
        assert!(c.is_mono(incl));
        assert!(!c.is_mono(constant));
    }

    #[test]
    fn identities_are_monic_in_triv3() {
        let x = fixtures::triv3();
        for a in x.cat().objects() {
            assert!(x.cat().is_mono(x.cat().id(a)));
        }
    }

    #[test]
    fn duplicate_ids_are_input_errors() {
        let err = FinCat::from_fn(
            vec!["A".into(), "A".into()],
            vec![("id".into(), ObjId(0), ObjId(0))],
            vec![MorId(0), MorId(0)],
            |_, _| MorId(0),
        )
        .unwrap_err();
        assert!(err.is_input_error());
        let err = FinCat::from_fn(
            vec!["A".into()],
            vec![("id".into(), ObjId(0), ObjId(3))],
            vec![MorId(0)],
            |_, _| MorId(0),
        )
        .unwrap_err();
        assert!(err.is_input_error());
    }

    #[test]
    fn missing_composite_is_reported() {
        let cat = FinCat::assemble(
            vec!["A".into()],
            vec![("id".into(), ObjId(0), ObjId(0))],
            vec![MorId(0)],
            vec![],
        )
        .unwrap();
        let r = cat.check_laws();
        assert!(!r.passed());
        assert_eq!(r.violations[0].law, "composite-missing");
    }
}
