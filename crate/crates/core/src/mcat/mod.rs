//! Stable systems of monics, subobjects, and partial-map categories.

mod par;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor, MorId, NatTrans, ObjId};
use crate::report::CheckReport;

pub use par::{mtotal, phi, phi_psi_round_trip, psi, pullback_via_par, MTotal, Par, Span};

/// A validated stable system of monics in some [`FinCat`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MSystem {
    members: BTreeSet<MorId>,
}

impl MSystem {
    pub fn new(c: &FinCat, members: impl IntoIterator<Item = MorId>) -> Result<MSystem> {
        let members: BTreeSet<MorId> = members.into_iter().collect();
        let list: Vec<MorId> = members.iter().copied().collect();
        let report = check_msystem(c, &list)?;
        if report.passed() {
            Ok(MSystem { members })
        } else {
            Err(Error::Laws(Box::new(report)))
        }
    }

    /// All isomorphisms: the least stable system.
    pub fn isos(c: &FinCat) -> MSystem {
        MSystem {
            members: c.morphisms().filter(|&f| c.is_iso(f)).collect(),
        }
    }

    pub fn contains(&self, f: MorId) -> bool {
        self.members.contains(&f)
    }

    pub fn members(&self) -> impl Iterator<Item = MorId> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members with codomain `d`, in id order.
    pub fn into_obj<'a>(&'a self, c: &'a FinCat, d: ObjId) -> impl Iterator<Item = MorId> + 'a {
        self.members().filter(move |&m| c.cod(m) == d)
    }
}

/// Check that `members` is a stable system of monics in `c`.
///
/// The stability condition asks that for each member `m: B → D` and each
/// `f: A → D` a pullback `f ∘ p = m ∘ q` exists and its leg `p` (the pullback
/// of `m` along `f`) is a member.
pub fn check_msystem(c: &FinCat, members: &[MorId]) -> Result<CheckReport> {
    for &m in members {
        c.check_mor(m)?;
    }
    let set: BTreeSet<MorId> = members.iter().copied().collect();
    let name = |f: MorId| c.mor_name(f).to_string();
    let mut r = CheckReport::new("msystem");
    for &m in &set {
        r.expect("monic", c.is_mono(m), || vec![("m", name(m))]);
    }
    for f in c.morphisms() {
        if c.is_iso(f) {
            r.expect("contains-isos", set.contains(&f), || vec![("iso", name(f))]);
        }
    }
    for &m in &set {
        for &n in &set {
            if let Some(nm) = c.try_compose(n, m) {
                r.expect("closed-under-composition", set.contains(&nm), || {
                    vec![("m", name(m)), ("n", name(n)), ("composite", name(nm))]
                });
            }
        }
    }
    for &m in &set {
        for f in c.into_obj(c.cod(m)) {
            let w = || vec![("m", name(m)), ("f", name(f))];
            match c.pullback(f, m)? {
                None => {
                    r.tick("pullback-exists");
                    r.violation("pullback-exists", w());
                }
                Some(sq) => {
                    r.tick("pullback-exists");
                    r.expect("pullback-stable", set.contains(&sq.p), w);
                }
            }
        }
    }
    Ok(r.finish())
}

/// The least representative `(dom, id)` of the subobject `m` represents.
pub fn canonical_subobject(c: &FinCat, m: MorId) -> MorId {
    c.objects()
        .flat_map(|x| c.isos(x, c.dom(m)))
        .map(|phi| c.compose(m, phi))
        .min_by_key(|&n| (c.dom(n), n))
        .expect("identity is an iso")
}

/// Canonical representatives of the subobjects of `d`, ordered by
/// `(domain, id)`.
pub fn m_subobjects(c: &FinCat, ms: &MSystem, d: ObjId) -> Result<Vec<MorId>> {
    c.check_obj(d)?;
    let reps: BTreeSet<(ObjId, MorId)> = ms
        .into_obj(c, d)
        .map(|m| canonical_subobject(c, m))
        .map(|m| (c.dom(m), m))
        .collect();
    Ok(reps.into_iter().map(|(_, m)| m).collect())
}

/// `m ≤ n` as subobjects: `m` factors through `n`.
pub fn subobject_leq(c: &FinCat, m: MorId, n: MorId) -> bool {
    c.cod(m) == c.cod(n) && c.hom(c.dom(m), c.dom(n)).iter().any(|&h| c.compose(n, h) == m)
}

/// Pull the subobject `m` of `cod f` back along `f`.
pub fn pull_back_subobject(c: &FinCat, f: MorId, m: MorId) -> Result<MorId> {
    let sq = c
        .pullback(f, m)?
        .ok_or_else(|| Error::precondition("no pullback of a member; M is not stable"))?;
    Ok(canonical_subobject(c, sq.p))
}

/// Whether every naturality square of `alpha: F ⇒ G` at a member of `ms`
/// is a pullback.
pub fn check_mcartesian(
    src: &FinCat,
    tgt: &FinCat,
    from: &Functor,
    to: &Functor,
    alpha: &NatTrans,
    ms: &MSystem,
) -> CheckReport {
    let mut r = CheckReport::new("m-cartesian");
    for m in ms.members() {
        let (a, b) = (src.dom(m), src.cod(m));
        let holds = tgt.is_pullback(alpha.at(b), to.mor(m), from.mor(m), alpha.at(a));
        r.expect("naturality-square-pullback", holds, || {
            vec![
                ("m", src.mor_name(m).to_string()),
                ("top", tgt.mor_name(from.mor(m)).to_string()),
                ("left", tgt.mor_name(alpha.at(a)).to_string()),
                ("right", tgt.mor_name(alpha.at(b)).to_string()),
                ("bottom", tgt.mor_name(to.mor(m)).to_string()),
            ]
        });
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn isos_are_stable_everywhere() {
        for c in [fixtures::triv3().cat().clone(), fixtures::inj2().0, fixtures::ab2().0] {
            let isos: Vec<MorId> = MSystem::isos(&c).members().collect();
            assert!(check_msystem(&c, &isos).unwrap().passed());
        }
    }

    #[test]
    fn dropping_an_inclusion_breaks_the_system() {
        let (c, m) = fixtures::inj2();
        let drop = c.mor("{1}->{1,2}[1]").unwrap();
        let fewer: Vec<MorId> = m.members().filter(|&f| f != drop).collect();
        let r = check_msystem(&c, &fewer).unwrap();
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.mentions("{1}->{1,2}[1]")));
    }

    #[test]
    fn non_monic_members_fail() {
        let (c, m) = fixtures::inj2();
        let mut more: Vec<MorId> = m.members().collect();
        more.push(c.mor("{1,2}->{1}[11]").unwrap());
        let r = check_msystem(&c, &more).unwrap();
        assert!(r.violations_of("monic").next().is_some());
    }

    #[test]
    fn subobject_counts() {
        let t = fixtures::triv3();
        let isos = MSystem::isos(t.cat());
        for a in t.cat().objects() {
            assert_eq!(m_subobjects(t.cat(), &isos, a).unwrap().len(), 1);
        }
        let (c, m) = fixtures::inj2();
        let subs = m_subobjects(&c, &m, c.obj("{1,2}").unwrap()).unwrap();
        assert_eq!(subs.len(), 4);
        let (ab, m) = fixtures::ab2();
        let subs = m_subobjects(&ab, &m, ab.obj("Z2+Z2").unwrap()).unwrap();
        let names: Vec<&str> = subs.iter().map(|&s| ab.mor_name(s)).collect();
        assert_eq!(names, ["zero_0_V", "i1", "i2", "diag", "m[0110]"]);
        assert!(subobject_leq(&ab, subs[0], subs[3]));
        assert!(!subobject_leq(&ab, subs[1], subs[3]));
    }

    #[test]
    fn collapsing_square_is_not_cartesian() {
        // Source: the arrow category a: 0 -> 1 with every map in M.
        let arrow = FinCat::from_fn(
            vec!["0".into(), "1".into()],
            vec![
                ("id0".into(), ObjId(0), ObjId(0)),
                ("id1".into(), ObjId(1), ObjId(1)),
                ("a".into(), ObjId(0), ObjId(1)),
            ],
            vec![MorId(0), MorId(1)],
            |g, f| if g.0 == 2 { g } else { f },
        )
        .unwrap();
        let ms = MSystem::new(&arrow, arrow.morphisms()).unwrap();
        let (ab, _) = fixtures::ab2();
        let (z2, v) = (ab.obj("Z2").unwrap(), ab.obj("Z2+Z2").unwrap());
        let mor = |n: &str| ab.mor(n).unwrap();
        let from = Functor::new(&arrow, &ab, vec![z2, v], vec![mor("idZ2"), mor("idV"), mor("diag")]).unwrap();
        let to = Functor::new(&arrow, &ab, vec![z2, z2], vec![mor("idZ2"), mor("idZ2"), mor("idZ2")]).unwrap();
        let alpha = NatTrans::new(&arrow, &ab, &from, &to, vec![mor("idZ2"), mor("p1")]).unwrap();
        let r = check_mcartesian(&arrow, &ab, &from, &to, &alpha, &ms);
        assert!(!r.passed());
        assert!(r.violations[0].mentions("a"));

        let id = NatTrans::identity(&ab, &from);
        assert!(check_mcartesian(&arrow, &ab, &from, &from, &id, &ms).passed());
    }
}
