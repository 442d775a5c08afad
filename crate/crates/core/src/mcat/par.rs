use std::collections::{BTreeSet, HashMap};

use super::MSystem;
use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor, MorId, ObjId, PullbackSquare};
use crate::report::CheckReport;
use crate::restriction::{check_restriction_functor, RestrCat};
use crate::splitting::{first_unsplit, split_restriction_idempotent};

/// Canonical representative of a partial map `src ← apex → dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub apex: ObjId,
    pub m: MorId,
    pub f: MorId,
}

/// The partial-map category `Par(C, M)`.
#[derive(Debug, Clone)]
pub struct Par {
    base: FinCat,
    ms: MSystem,
    spans: Vec<Span>,
    index: HashMap<(MorId, MorId), MorId>,
    restr: RestrCat,
}

/// Least `(apex, m∘φ, f∘φ)` over isomorphisms `φ` into the apex.
pub fn canonical_span(c: &FinCat, m: MorId, f: MorId) -> Span {
    let apex = c.dom(m);
    c.objects()
        .flat_map(|x| c.isos(x, apex))
        .map(|phi| Span {
            apex: c.dom(phi),
            m: c.compose(m, phi),
            f: c.compose(f, phi),
        })
        .min()
        .expect("identity is an iso")
}

impl Par {
    pub fn new(c: &FinCat, ms: &MSystem) -> Result<Par> {
        let mut classes = BTreeSet::new();
        for m in ms.members() {
            for x in c.objects() {
                for &f in c.hom(c.dom(m), x) {
                    let s = canonical_span(c, m, f);
                    classes.insert((c.cod(s.m), c.cod(s.f), s));
                }
            }
        }
        let spans: Vec<Span> = classes.into_iter().map(|(_, _, s)| s).collect();
        let index: HashMap<(MorId, MorId), MorId> =
            spans.iter().enumerate().map(|(i, s)| ((s.m, s.f), MorId(i))).collect();
        let morphisms = spans
            .iter()
            .map(|s| {
                (
                    format!("{}|{}", c.mor_name(s.m), c.mor_name(s.f)),
                    c.cod(s.m),
                    c.cod(s.f),
                )
            })
            .collect();
        let lookup = |m: MorId, f: MorId| -> Result<MorId> {
            let s = canonical_span(c, m, f);
            index
                .get(&(s.m, s.f))
                .copied()
                .ok_or_else(|| Error::internal("span outside the enumerated classes"))
        };
        let identities = c
            .objects()
            .map(|a| lookup(c.id(a), c.id(a)))
            .collect::<Result<Vec<_>>>()?;
        let mut cache: HashMap<(MorId, MorId), PullbackSquare> = HashMap::new();
        let mut failure = None;
        let objects = c.objects().map(|a| c.obj_name(a).to_string()).collect();
        let cat = FinCat::from_fn(objects, morphisms, identities, |g, f| {
            let (sf, sg) = (spans[f.0], spans[g.0]);
            let sq = match cache.get(&(sf.f, sg.m)) {
                Some(sq) => *sq,
                None => match c.pullback(sf.f, sg.m) {
                    Ok(Some(sq)) => {
                        cache.insert((sf.f, sg.m), sq);
                        sq
                    }
                    _ => {
                        failure = Some(Error::precondition("a member has no pullback; M is not stable"));
                        return MorId(0);
                    }
                },
            };
            match lookup(c.compose(sf.m, sq.p), c.compose(sg.f, sq.q)) {
                Ok(id) => id,
                Err(e) => {
                    failure = Some(e);
                    MorId(0)
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let cat = cat?;
        let bar = spans.iter().map(|s| lookup(s.m, s.m)).collect::<Result<Vec<_>>>()?;
        let restr = RestrCat::new(cat, bar)?;
        Ok(Par {
            base: c.clone(),
            ms: ms.clone(),
            spans,
            index,
            restr,
        })
    }

    pub fn restr(&self) -> &RestrCat {
        &self.restr
    }

    pub fn cat(&self) -> &FinCat {
        self.restr.cat()
    }

    pub fn base(&self) -> &FinCat {
        &self.base
    }

    pub fn msystem(&self) -> &MSystem {
        &self.ms
    }

    pub fn span(&self, f: MorId) -> Span {
        self.spans[f.0]
    }

    /// The class of `(m, f)`.
    pub fn class_of(&self, m: MorId, f: MorId) -> Result<MorId> {
        let c = &self.base;
        c.check_mor(m)?;
        c.check_mor(f)?;
        if !self.ms.contains(m) {
            return Err(Error::input(format!("`{}` is not in the stable system", c.mor_name(m))));
        }
        if c.dom(m) != c.dom(f) {
            return Err(Error::input("span legs must share a domain"));
        }
        let s = canonical_span(c, m, f);
        self.index
            .get(&(s.m, s.f))
            .copied()
            .ok_or_else(|| Error::internal("span class missing from Par"))
    }

    /// The total map `(1, f)`.
    pub fn total(&self, f: MorId) -> MorId {
        self.class_of(self.base.id(self.base.dom(f)), f)
            .expect("identities are members")
    }

    /// The partial map `(m, 1)` backwards along a member.
    pub fn partial_inverse(&self, m: MorId) -> Result<MorId> {
        self.class_of(m, self.base.id(self.base.dom(m)))
    }

    /// The inclusion `C → Par(C)`.
    pub fn inclusion(&self) -> Functor {
        Functor {
            omap: self.base.objects().collect(),
            mmap: self.base.morphisms().map(|f| self.total(f)).collect(),
        }
    }
}

/// `MTotal(X)`: total maps of a split restriction category with the
/// restriction monics.
#[derive(Debug, Clone)]
pub struct MTotal {
    pub cat: FinCat,
    pub ms: MSystem,
    /// Local morphism id → id in `X`.
    pub embed: Vec<MorId>,
    local: HashMap<MorId, MorId>,
}

impl MTotal {
    /// The local id of a total map of `X`.
    pub fn local(&self, f: MorId) -> Option<MorId> {
        self.local.get(&f).copied()
    }
}

pub fn mtotal(x: &RestrCat) -> Result<MTotal> {
    if let Some(e) = first_unsplit(x) {
        return Err(Error::precondition(format!(
            "restriction idempotent `{}` does not split",
            x.cat().mor_name(e)
        )));
    }
    let (cat, embed) = x.total_subcategory()?;
    let local: HashMap<MorId, MorId> = embed.iter().enumerate().map(|(i, &f)| (f, MorId(i))).collect();
    let mut members = Vec::new();
    for f in x.cat().morphisms().filter(|&f| x.is_restriction_monic(f)) {
        let l = local
            .get(&f)
            .ok_or_else(|| Error::internal("a restriction monic is not total"))?;
        members.push(*l);
    }
    let ms = MSystem::new(&cat, members).map_err(|e| Error::internal(format!("restriction monics: {e}")))?;
    Ok(MTotal { cat, ms, embed, local })
}

/// `Φ_X: X → Par(MTotal(X))`, `f ↦ (m, f∘m)` where `f̄ = m∘r` is the
/// canonical splitting.
pub fn phi(x: &RestrCat) -> Result<(MTotal, Par, Functor)> {
    let mt = mtotal(x)?;
    let par = Par::new(&mt.cat, &mt.ms)?;
    let c = x.cat();
    let mut mmap = Vec::with_capacity(c.num_morphisms());
    for f in c.morphisms() {
        let (m, _) = split_restriction_idempotent(x, x.bar(f))?.expect("X is split");
        let fm = c.compose(f, m);
        let (lm, lfm) = mt
            .local(m)
            .zip(mt.local(fm))
            .ok_or_else(|| Error::internal("splitting produced a non-total map"))?;
        mmap.push(par.class_of(lm, lfm)?);
    }
    let functor = Functor::new(c, par.cat(), c.objects().collect(), mmap)?;
    Ok((mt, par, functor))
}

/// `Ψ_C: MTotal(Par(C)) → C`, `(m, f) ↦ f∘m⁻¹` on total classes.
pub fn psi(par: &Par) -> Result<(MTotal, Functor)> {
    let mt = mtotal(par.restr())?;
    let functor = psi_on(par, &mt)?;
    Ok((mt, functor))
}

fn psi_on(par: &Par, mt: &MTotal) -> Result<Functor> {
    let c = par.base();
    let mut mmap = Vec::with_capacity(mt.embed.len());
    for &t in &mt.embed {
        let s = par.span(t);
        let inv = c.inverse(s.m).ok_or_else(|| {
            Error::internal(format!(
                "total class `{}` has a non-invertible leg",
                par.cat().mor_name(t)
            ))
        })?;
        mmap.push(c.compose(s.f, inv));
    }
    Functor::new(&mt.cat, c, c.objects().collect(), mmap)
}

/// The comparison functors between `X` and `Par(MTotal(X))` and between
/// `C` and `MTotal(Par(C))` for `C = MTotal(X)`, checked to be mutually
/// inverse on objects and hom-sets.
pub fn phi_psi_round_trip(x: &RestrCat) -> Result<CheckReport> {
    let mut r = CheckReport::new("phi-psi");
    let (mt, par, phi_x) = phi(x)?;
    let c = x.cat();
    r.absorb("phi-restriction", check_restriction_functor(&phi_x, x, par.restr())?);
    r.expect(
        "phi-bijective-on-objects",
        phi_x.is_injective_on_objects() && c.num_objects() == par.cat().num_objects(),
        Vec::<(String, String)>::new,
    );
    r.expect(
        "phi-bijective-on-homs",
        phi_x.is_fully_faithful(c, par.cat()),
        Vec::<(String, String)>::new,
    );

    // Ψ ∘ MTotal(Φ) on total maps of X.
    let (mt_par, psi_c) = psi(&par)?;
    for (local, &f) in mt.embed.iter().enumerate() {
        let image = phi_x.mor(f);
        let w = || vec![("f", c.mor_name(f).to_string())];
        match mt_par.local(image) {
            None => r.expect("phi-preserves-totality", false, w),
            Some(t) => r.expect("psi-after-phi", psi_c.mor(t) == MorId(local), w),
        }
    }

    // Par(Ψ) ∘ Φ_{Par(C)} on Par(C).
    let (mt2, par2, phi_par) = phi(par.restr())?;
    let psi2 = psi_on(&par, &mt2)?;
    for g in par.cat().morphisms() {
        let s = par2.span(phi_par.mor(g));
        let back = par.class_of(psi2.mor(s.m), psi2.mor(s.f));
        r.expect("par-psi-after-phi", back.ok() == Some(g), || {
            vec![("span", par.cat().mor_name(g).to_string())]
        });
    }
    Ok(r.finish())
}

/// For the square `f∘n = m∘g` with `m, n` members: whether it is a pullback,
/// computed directly and via `(m,1)∘(1,f) = (1,g)∘(n,1)` in `Par(C)`.
/// Disagreement is an internal error.
pub fn pullback_via_par(par: &Par, f: MorId, g: MorId, m: MorId, n: MorId) -> Result<bool> {
    let c = par.base();
    for h in [f, g, m, n] {
        c.check_mor(h)?;
    }
    let typed = c.cod(f) == c.cod(m) && c.dom(g) == c.dom(n) && c.cod(g) == c.dom(m) && c.cod(n) == c.dom(f);
    if !typed {
        return Err(Error::input("square is ill-typed"));
    }
    let p = par.cat();
    let lhs = p.compose(par.partial_inverse(m)?, par.total(f));
    let rhs = p.compose(par.total(g), par.partial_inverse(n)?);
    let via_par = lhs == rhs;
    let direct = c.is_pullback(f, m, n, g);
    if via_par != direct {
        return Err(Error::internal(format!(
            "pullback test disagrees with Par at f=`{}`, g=`{}`, m=`{}`, n=`{}`",
            c.mor_name(f),
            c.mor_name(g),
            c.mor_name(m),
            c.mor_name(n)
        )));
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::splitting::{is_split, kr};

    #[test]
    fn par_of_isos_is_the_base() {
        let t = fixtures::triv3();
        let par = Par::new(t.cat(), &MSystem::isos(t.cat())).unwrap();
        assert_eq!(par.cat().num_morphisms(), 3);
        for f in par.cat().morphisms() {
            assert!(par.restr().is_total(f));
        }
    }

    #[test]
    fn par_inj2_counts() {
        let (c, m) = fixtures::inj2();
        let par = Par::new(&c, &m).unwrap();
        assert_eq!(par.cat().num_morphisms(), 38);
        let top = c.obj("{1,2}").unwrap();
        assert_eq!(par.cat().hom(top, top).len(), 9);
        assert!(is_split(par.restr()));
    }

    #[test]
    fn par_ab2_endomorphisms_of_z2() {
        let (c, m) = fixtures::ab2();
        let par = Par::new(&c, &m).unwrap();
        let z2 = c.obj("Z2").unwrap();
        let names: Vec<&str> = par.cat().hom(z2, z2).iter().map(|&f| par.cat().mor_name(f)).collect();
        assert_eq!(names, ["zero_0_Z2|zero_0_Z2", "idZ2|zero_Z2_Z2", "idZ2|idZ2"]);
    }

    #[test]
    fn total_classes_have_iso_legs() {
        let (c, m) = fixtures::inj2();
        let par = Par::new(&c, &m).unwrap();
        for f in par.cat().morphisms() {
            assert_eq!(par.restr().is_total(f), c.is_iso(par.span(f).m));
        }
    }

    #[test]
    fn mtotal_requires_split() {
        let err = mtotal(&fixtures::max5_b()).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref s) if s.contains("`1`")));
        let t = mtotal(&kr(&fixtures::triv3()).unwrap().result).unwrap();
        assert_eq!(t.cat.num_morphisms(), 3);
        assert_eq!(t.ms.len(), 3);
    }

    #[test]
    fn mtotal_of_pfin2() {
        let mt = mtotal(&fixtures::pfin2()).unwrap();
        assert_eq!(mt.cat.num_morphisms(), 18);
        assert_eq!(mt.ms.len(), 14);
    }

    #[test]
    fn phi_on_pfin2() {
        let x = fixtures::pfin2();
        let (_, par, phi_x) = phi(&x).unwrap();
        let c = x.cat();
        let total = c.mor("{1,2}->{1,2}[21]").unwrap();
        let s = par.span(phi_x.mor(total));
        assert!(par.base().is_iso(s.m));
        let partial = c.mor("{1,2}->{1,2}[2-]").unwrap();
        assert_eq!(par.cat().mor_name(phi_x.mor(partial)), "{1}->{1,2}[1]|{1}->{1,2}[2]");
    }

    #[test]
    fn round_trips() {
        for x in [fixtures::pfin2(), kr(&fixtures::max5_b()).unwrap().result] {
            let r = phi_psi_round_trip(&x).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn pullback_via_par_examples() {
        let (c, m) = fixtures::inj2();
        let par = Par::new(&c, &m).unwrap();
        let a = c.obj("{1}").unwrap();
        let id = c.id(a);
        assert!(pullback_via_par(&par, id, id, id, id).unwrap());
        let i1 = c.mor("{1}->{1,2}[1]").unwrap();
        let i2 = c.mor("{2}->{1,2}[2]").unwrap();
        let e1 = c.mor("{}->{1}[]").unwrap();
        let e2 = c.mor("{}->{2}[]").unwrap();
        assert!(pullback_via_par(&par, i1, e2, i2, e1).unwrap());

        let (ab, mab) = fixtures::ab2();
        let par = Par::new(&ab, &mab).unwrap();
        let z = |n: &str| ab.mor(n).unwrap();
        // Commutes through the zero group, but the pullback of diag along idV is Z2.
        assert!(!pullback_via_par(&par, z("idV"), z("zero_0_Z2"), z("diag"), z("zero_0_V")).unwrap());
        assert!(pullback_via_par(&par, z("i1"), z("zero_0_Z2"), z("diag"), z("zero_0_Z2")).unwrap());
    }
}
