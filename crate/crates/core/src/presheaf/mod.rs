//! Finite-set-valued presheaves on a finite category.
//!
//! A presheaf stores, for each object, a list of named elements and, for each
//! morphism `f: A → B`, its action `P(B) → P(A)`, `x ↦ x·f`, on element
//! indices.

mod mpsh;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::report::CheckReport;

pub use mpsh::{
    classify, is_mpsh_map, msub_rep_iso_check, pullback_witness, sigma_classifier, Classifier, MPshCheck, MPshChoice,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    sets: Vec<Vec<String>>,
    act: Vec<Vec<usize>>,
}

/// Validate presheaf data. Shape errors are input errors; law failures are
/// reported.
pub fn check_presheaf(c: &FinCat, sets: &[Vec<String>], act: &[Vec<usize>]) -> Result<CheckReport> {
    if sets.len() != c.num_objects() {
        return Err(Error::input(format!(
            "presheaf has {} sets for {} objects",
            sets.len(),
            c.num_objects()
        )));
    }
    for (a, set) in sets.iter().enumerate() {
        let mut seen = HashSet::new();
        for x in set {
            if !seen.insert(x) {
                return Err(Error::input(format!(
                    "duplicate element `{x}` at object `{}`",
                    c.obj_name(ObjId(a))
                )));
            }
        }
    }
    if act.len() != c.num_morphisms() {
        return Err(Error::input("presheaf action must be given for every morphism"));
    }
    for f in c.morphisms() {
        let (a, b) = (c.dom(f), c.cod(f));
        let row = &act[f.0];
        if row.len() != sets[b.0].len() || row.iter().any(|&y| y >= sets[a.0].len()) {
            return Err(Error::input(format!(
                "action of `{}` is not a function P(cod) → P(dom)",
                c.mor_name(f)
            )));
        }
    }
    let mut r = CheckReport::new("presheaf");
    for a in c.objects() {
        let id = c.id(a);
        for (x, name) in sets[a.0].iter().enumerate() {
            r.expect("identity", act[id.0][x] == x, || {
                vec![("object", c.obj_name(a).to_string()), ("element", name.clone())]
            });
        }
    }
    for (g, f, gf) in c.composition_entries() {
        for (x, name) in sets[c.cod(g).0].iter().enumerate() {
            let lhs = act[f.0][act[g.0][x]];
            r.expect("composition", lhs == act[gf.0][x], || {
                vec![
                    ("element", name.clone()),
                    ("f", c.mor_name(f).to_string()),
                    ("g", c.mor_name(g).to_string()),
                ]
            });
        }
    }
    Ok(r.finish())
}

impl Presheaf {
    pub fn new(c: &FinCat, sets: Vec<Vec<String>>, act: Vec<Vec<usize>>) -> Result<Presheaf> {
        let r = check_presheaf(c, &sets, &act)?;
        if !r.passed() {
            return Err(Error::Laws(Box::new(r)));
        }
        Ok(Presheaf { sets, act })
    }

    /// Build from an action function on indices.
    pub fn from_fn(c: &FinCat, sets: Vec<Vec<String>>, mut act: impl FnMut(MorId, usize) -> usize) -> Result<Presheaf> {
        let table = c
            .morphisms()
            .map(|f| (0..sets[c.cod(f).0].len()).map(|x| act(f, x)).collect())
            .collect();
        Presheaf::new(c, sets, table)
    }

    /// The presheaf with one element `*` everywhere.
    pub fn terminal(c: &FinCat) -> Presheaf {
        Presheaf {
            sets: c.objects().map(|_| vec!["*".to_string()]).collect(),
            act: c.morphisms().map(|_| vec![0]).collect(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, a: ObjId) -> &[String] {
        &self.sets[a.0]
    }

    pub fn sets(&self) -> &[Vec<String>] {
        &self.sets
    }

    pub fn len(&self, a: ObjId) -> usize {
        self.sets[a.0].len()
    }

    pub fn total_len(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn elem_name(&self, a: ObjId, x: usize) -> &str {
        &self.sets[a.0][x]
    }

    pub fn elem(&self, a: ObjId, name: &str) -> Option<usize> {
        self.sets.get(a.0)?.iter().position(|x| x == name)
    }

    /// `x·f` for `x ∈ P(cod f)`.
    pub fn act(&self, f: MorId, x: usize) -> usize {
        self.act[f.0][x]
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.act
    }

    /// All `(object, element)` pairs in object order.
    pub fn elements(&self) -> Vec<(ObjId, usize)> {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(a, s)| (0..s.len()).map(move |x| (ObjId(a), x)))
            .collect()
    }
}

/// The representable `y(A)`: `y(A)(B) = hom(B, A)`, acting by precomposition.
pub fn yoneda(c: &FinCat, a: ObjId) -> Result<Presheaf> {
    c.check_obj(a)?;
    let sets = c
        .objects()
        .map(|b| c.hom(b, a).iter().map(|&g| c.mor_name(g).to_string()).collect())
        .collect();
    let act = c
        .morphisms()
        .map(|f| {
            c.hom(c.cod(f), a)
                .iter()
                .map(|&g| position(c.hom(c.dom(f), a), c.compose(g, f)))
                .collect()
        })
        .collect();
    Ok(Presheaf { sets, act })
}

/// Index of the morphism `g` in `y(A)(dom g)`.
pub fn yoneda_index(c: &FinCat, g: MorId) -> usize {
    position(c.hom(c.dom(g), c.cod(g)), g)
}

fn position(hom: &[MorId], g: MorId) -> usize {
    hom.iter().position(|&h| h == g).expect("composite lies in the hom-set")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMap {
    comps: Vec<Vec<usize>>,
}

/// Validate a natural transformation `P ⇒ Q` given by components on indices.
pub fn check_presheaf_map(c: &FinCat, p: &Presheaf, q: &Presheaf, comps: &[Vec<usize>]) -> Result<CheckReport> {
    if comps.len() != c.num_objects() {
        return Err(Error::input("a component is required at every object"));
    }
    for a in c.objects() {
        let row = &comps[a.0];
        if row.len() != p.len(a) || row.iter().any(|&y| y >= q.len(a)) {
            return Err(Error::input(format!(
                "component at `{}` is not a function P → Q",
                c.obj_name(a)
            )));
        }
    }
    let mut r = CheckReport::new("presheaf-map");
    for f in c.morphisms() {
        let (a, b) = (c.dom(f), c.cod(f));
        for x in 0..p.len(b) {
            let holds = comps[a.0][p.act(f, x)] == q.act(f, comps[b.0][x]);
            r.expect("naturality", holds, || {
                vec![
                    ("f", c.mor_name(f).to_string()),
                    ("element", p.elem_name(b, x).to_string()),
                ]
            });
        }
    }
    Ok(r.finish())
}

impl PresheafMap {
    pub fn new(c: &FinCat, p: &Presheaf, q: &Presheaf, comps: Vec<Vec<usize>>) -> Result<PresheafMap> {
        let r = check_presheaf_map(c, p, q, &comps)?;
        if !r.passed() {
            return Err(Error::Laws(Box::new(r)));
        }
        Ok(PresheafMap { comps })
    }

    pub fn from_fn(
        c: &FinCat,
        p: &Presheaf,
        q: &Presheaf,
        mut comp: impl FnMut(ObjId, usize) -> usize,
    ) -> Result<PresheafMap> {
        let comps = c
            .objects()
            .map(|a| (0..p.len(a)).map(|x| comp(a, x)).collect())
            .collect();
        PresheafMap::new(c, p, q, comps)
    }

    pub fn identity(p: &Presheaf) -> PresheafMap {
        PresheafMap {
            comps: p.sets.iter().map(|s| (0..s.len()).collect()).collect(),
        }
    }

    pub fn at(&self, a: ObjId, x: usize) -> usize {
        self.comps[a.0][x]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.comps
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PresheafMap) -> PresheafMap {
        PresheafMap {
            comps: self
                .comps
                .iter()
                .enumerate()
                .map(|(a, row)| row.iter().map(|&y| next.comps[a][y]).collect())
                .collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|row| {
            let mut seen = HashSet::new();
            row.iter().all(|y| seen.insert(*y))
        })
    }

    pub fn is_bijective(&self, q: &Presheaf) -> bool {
        self.is_injective()
            && self
                .comps
                .iter()
                .enumerate()
                .all(|(a, row)| row.len() == q.len(ObjId(a)))
    }

    /// Per-object membership mask of the image in `q`.
    pub fn image(&self, q: &Presheaf) -> Vec<Vec<bool>> {
        self.comps
            .iter()
            .enumerate()
            .map(|(a, row)| {
                let mut mask = vec![false; q.len(ObjId(a))];
                for &y in row {
                    mask[y] = true;
                }
                mask
            })
            .collect()
    }
}

/// `y(h): y(A) ⇒ y(B)` by postcomposition with `h: A → B`.
pub fn yoneda_map(c: &FinCat, h: MorId) -> Result<(Presheaf, Presheaf, PresheafMap)> {
    c.check_mor(h)?;
    let ya = yoneda(c, c.dom(h))?;
    let yb = yoneda(c, c.cod(h))?;
    let comps = c
        .objects()
        .map(|x| {
            c.hom(x, c.dom(h))
                .iter()
                .map(|&g| position(c.hom(x, c.cod(h)), c.compose(h, g)))
                .collect()
        })
        .collect();
    Ok((ya, yb, PresheafMap { comps }))
}

/// The map `y(D) ⇒ Q` corresponding to `y ∈ Q(D)`: `h ↦ y·h`.
pub fn element_map(c: &FinCat, q: &Presheaf, d: ObjId, y: usize) -> PresheafMap {
    PresheafMap {
        comps: c
            .objects()
            .map(|x| c.hom(x, d).iter().map(|&h| q.act(h, y)).collect())
            .collect(),
    }
}

/// Coproduct with elements named `i:x` and its coprojections.
pub fn coproduct(c: &FinCat, summands: &[&Presheaf]) -> (Presheaf, Vec<PresheafMap>) {
    let mut offsets = vec![vec![0; summands.len()]; c.num_objects()];
    let mut sets = vec![Vec::new(); c.num_objects()];
    for a in c.objects() {
        for (i, p) in summands.iter().enumerate() {
            offsets[a.0][i] = sets[a.0].len();
            sets[a.0].extend(p.set(a).iter().map(|x| format!("{i}:{x}")));
        }
    }
    let act = c
        .morphisms()
        .map(|f| {
            let (a, b) = (c.dom(f), c.cod(f));
            summands
                .iter()
                .enumerate()
                .flat_map(|(i, p)| (0..p.len(b)).map(move |x| (i, p.act(f, x))))
                .map(|(i, y)| offsets[a.0][i] + y)
                .collect()
        })
        .collect();
    let injections = (0..summands.len())
        .map(|i| PresheafMap {
            comps: c
                .objects()
                .map(|a| (0..summands[i].len(a)).map(|x| offsets[a.0][i] + x).collect())
                .collect(),
        })
        .collect();
    (Presheaf { sets, act }, injections)
}

/// Pointwise pullback of `mu: P ⇒ R` and `nu: Q ⇒ R`, elements named `x⊗y`,
/// with its projections to `P` and `Q`.
pub fn pullback(
    c: &FinCat,
    p: &Presheaf,
    q: &Presheaf,
    mu: &PresheafMap,
    nu: &PresheafMap,
) -> (Presheaf, PresheafMap, PresheafMap) {
    let pairs: Vec<Vec<(usize, usize)>> = c
        .objects()
        .map(|a| {
            (0..p.len(a))
                .flat_map(|x| (0..q.len(a)).map(move |y| (x, y)))
                .filter(|&(x, y)| mu.at(a, x) == nu.at(a, y))
                .collect()
        })
        .collect();
    let sets = c
        .objects()
        .map(|a| {
            pairs[a.0]
                .iter()
                .map(|&(x, y)| format!("{}⊗{}", p.elem_name(a, x), q.elem_name(a, y)))
                .collect()
        })
        .collect();
    let act = c
        .morphisms()
        .map(|f| {
            let (a, b) = (c.dom(f), c.cod(f));
            pairs[b.0]
                .iter()
                .map(|&(x, y)| {
                    let image = (p.act(f, x), q.act(f, y));
                    pairs[a.0]
                        .iter()
                        .position(|&pr| pr == image)
                        .expect("pullback is closed under the action")
                })
                .collect()
        })
        .collect();
    let proj = |side: fn(&(usize, usize)) -> usize| PresheafMap {
        comps: pairs.iter().map(|row| row.iter().map(side).collect()).collect(),
    };
    (Presheaf { sets, act }, proj(|pr| pr.0), proj(|pr| pr.1))
}

/// The subpresheaf on a membership mask closed under the action, with its
/// inclusion.
pub fn subpresheaf(c: &FinCat, p: &Presheaf, mask: &[Vec<bool>]) -> Result<(Presheaf, PresheafMap)> {
    let keep: Vec<Vec<usize>> = mask
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, &k)| k).map(|(x, _)| x).collect())
        .collect();
    let sets = c
        .objects()
        .map(|a| keep[a.0].iter().map(|&x| p.elem_name(a, x).to_string()).collect())
        .collect();
    let mut act = Vec::with_capacity(c.num_morphisms());
    for f in c.morphisms() {
        let (a, b) = (c.dom(f), c.cod(f));
        let mut row = Vec::with_capacity(keep[b.0].len());
        for &x in &keep[b.0] {
            let y = p.act(f, x);
            let idx = keep[a.0]
                .iter()
                .position(|&k| k == y)
                .ok_or_else(|| Error::input("mask is not closed under the action"))?;
            row.push(idx);
        }
        act.push(row);
    }
    Ok((Presheaf { sets, act }, PresheafMap { comps: keep }))
}

/// Every subpresheaf of `p` as a membership mask, each exactly once.
pub fn subfunctors(c: &FinCat, p: &Presheaf) -> Vec<Vec<Vec<bool>>> {
    let elems = p.elements();
    let mut state: Vec<Vec<Option<bool>>> = c.objects().map(|a| vec![None; p.len(a)]).collect();
    let mut out = Vec::new();
    subfunctors_from(c, p, &elems, 0, &mut state, &mut out);
    out
}

fn subfunctors_from(
    c: &FinCat,
    p: &Presheaf,
    elems: &[(ObjId, usize)],
    pos: usize,
    state: &mut Vec<Vec<Option<bool>>>,
    out: &mut Vec<Vec<Vec<bool>>>,
) {
    let Some(&(b, x)) = elems[pos..].iter().find(|&&(b, x)| state[b.0][x].is_none()) else {
        out.push(
            state
                .iter()
                .map(|row| row.iter().map(|s| s == &Some(true)).collect())
                .collect(),
        );
        return;
    };
    state[b.0][x] = Some(false);
    subfunctors_from(c, p, elems, pos + 1, state, out);
    state[b.0][x] = None;

    // Including x forces its whole orbit under the action.
    let orbit: Vec<(ObjId, usize)> = c.into_obj(b).into_iter().map(|f| (c.dom(f), p.act(f, x))).collect();
    if orbit.iter().any(|&(a, y)| state[a.0][y] == Some(false)) {
        return;
    }
    let fresh: Vec<(ObjId, usize)> = orbit.into_iter().filter(|&(a, y)| state[a.0][y].is_none()).collect();
    for &(a, y) in &fresh {
        state[a.0][y] = Some(true);
    }
    subfunctors_from(c, p, elems, pos + 1, state, out);
    for &(a, y) in &fresh {
        state[a.0][y] = None;
    }
}

/// Every natural transformation `P ⇒ Q`, in lexicographic order of
/// components.
pub fn enumerate_maps(c: &FinCat, p: &Presheaf, q: &Presheaf) -> Vec<PresheafMap> {
    let elems = p.elements();
    let mut assign: Vec<Vec<Option<usize>>> = c.objects().map(|a| vec![None; p.len(a)]).collect();
    let mut out = Vec::new();
    maps_from(c, p, q, &elems, 0, &mut assign, &mut out);
    out
}

fn maps_from(
    c: &FinCat,
    p: &Presheaf,
    q: &Presheaf,
    elems: &[(ObjId, usize)],
    pos: usize,
    assign: &mut Vec<Vec<Option<usize>>>,
    out: &mut Vec<PresheafMap>,
) {
    let Some(&(b, x)) = elems[pos..].iter().find(|&&(b, x)| assign[b.0][x].is_none()) else {
        out.push(PresheafMap {
            comps: assign
                .iter()
                .map(|row| row.iter().map(|v| v.expect("all assigned")).collect())
                .collect(),
        });
        return;
    };
    let into_b = c.into_obj(b);
    for y in 0..q.len(b) {
        // Choosing the image of x fixes the image of every restriction x·f.
        let mut trail = Vec::new();
        let mut ok = true;
        for &f in &into_b {
            let (a, xf, yf) = (c.dom(f), p.act(f, x), q.act(f, y));
            match assign[a.0][xf] {
                Some(v) if v != yf => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    assign[a.0][xf] = Some(yf);
                    trail.push((a, xf));
                }
            }
        }
        if ok {
            maps_from(c, p, q, elems, pos + 1, assign, out);
        }
        for (a, v) in trail {
            assign[a.0][v] = None;
        }
    }
}

/// A named list of presheaves: representables `y(A)` and coproducts of up to
/// `summands` representables (as multisets of objects).
pub fn generated_family(c: &FinCat, summands: usize) -> Result<Vec<(String, Presheaf)>> {
    let reps: Vec<Presheaf> = c.objects().map(|a| yoneda(c, a)).collect::<Result<_>>()?;
    let mut out: Vec<(String, Presheaf)> = c
        .objects()
        .map(|a| (format!("y({})", c.obj_name(a)), reps[a.0].clone()))
        .collect();
    let mut combos: Vec<Vec<usize>> = (0..c.num_objects()).map(|a| vec![a]).collect();
    for _ in 2..=summands {
        combos = combos
            .iter()
            .flat_map(|combo| {
                let last = *combo.last().expect("nonempty");
                (last..c.num_objects()).map(move |a| {
                    let mut next = combo.clone();
                    next.push(a);
                    next
                })
            })
            .collect();
        for combo in &combos {
            let parts: Vec<&Presheaf> = combo.iter().map(|&a| &reps[a]).collect();
            let name = combo
                .iter()
                .map(|&a| format!("y({})", c.obj_name(ObjId(a))))
                .collect::<Vec<_>>()
                .join("+");
            out.push((name, coproduct(c, &parts).0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn representable_sizes() {
        let t = fixtures::triv3();
        let c = t.cat();
        let ya = yoneda(c, c.obj("A").unwrap()).unwrap();
        assert_eq!(ya.set(c.obj("A").unwrap()), ["idA"]);
        assert!(ya.set(c.obj("B").unwrap()).is_empty());

        let (inj, _) = fixtures::inj2();
        let y = yoneda(&inj, inj.obj("{1,2}").unwrap()).unwrap();
        assert_eq!(y.len(inj.obj("{1}").unwrap()), 2);

        let m = fixtures::max5_b();
        let c = m.cat();
        let star = c.obj("*").unwrap();
        let y = yoneda(c, star).unwrap();
        assert_eq!(y.set(star), ["0", "1", "2", "3", "4", "5"]);
        for f in c.morphisms() {
            for x in 0..6 {
                assert_eq!(y.act(f, x), x.max(f.0));
            }
        }
    }

    #[test]
    fn broken_action_is_reported() {
        let m = fixtures::max5_a();
        let c = m.cat();
        let y = yoneda(c, c.obj("*").unwrap()).unwrap();
        let mut act = y.actions().to_vec();
        act[2][0] = 3;
        let r = check_presheaf(c, y.sets(), &act).unwrap();
        assert!(r.violations_of("composition").next().is_some());
        assert!(check_presheaf(c, y.sets(), &act[..3]).is_err());
    }

    #[test]
    fn sieves_of_a_representable() {
        let m = fixtures::max5_a();
        let c = m.cat();
        let y = yoneda(c, c.obj("*").unwrap()).unwrap();
        // Upward-closed subsets of the chain {0..5}.
        assert_eq!(subfunctors(c, &y).len(), 7);
        let (inj, _) = fixtures::inj2();
        for a in inj.objects() {
            let y = yoneda(&inj, a).unwrap();
            for mask in subfunctors(&inj, &y) {
                assert!(subpresheaf(&inj, &y, &mask).is_ok());
            }
        }
    }

    #[test]
    fn maps_out_of_representables_match_yoneda() {
        let (inj, _) = fixtures::inj2();
        for a in inj.objects() {
            let ya = yoneda(&inj, a).unwrap();
            for b in inj.objects() {
                let yb = yoneda(&inj, b).unwrap();
                let maps = enumerate_maps(&inj, &ya, &yb);
                assert_eq!(maps.len(), inj.hom(a, b).len());
                for mu in &maps {
                    assert!(check_presheaf_map(&inj, &ya, &yb, mu.components()).unwrap().passed());
                }
            }
        }
    }

    #[test]
    fn coproducts_and_pullbacks() {
        let (inj, _) = fixtures::inj2();
        let one = inj.obj("{1}").unwrap();
        let top = inj.obj("{1,2}").unwrap();
        let y1 = yoneda(&inj, one).unwrap();
        let (sum, inj_maps) = coproduct(&inj, &[&y1, &y1]);
        assert_eq!(sum.len(top), 2);
        assert_eq!(sum.set(one), ["0:{1}->{1}[1]", "1:{1}->{1}[1]"]);
        for i in &inj_maps {
            assert!(check_presheaf_map(&inj, &y1, &sum, i.components()).unwrap().passed());
        }
        let (_, ytop, incl) = yoneda_map(&inj, inj.mor("{1}->{1,2}[1]").unwrap()).unwrap();
        let (_, _, other) = yoneda_map(&inj, inj.mor("{2}->{1,2}[2]").unwrap()).unwrap();
        let y2 = yoneda(&inj, inj.obj("{2}").unwrap()).unwrap();
        let (pb, pr1, pr2) = pullback(&inj, &y1, &y2, &incl, &other);
        assert_eq!(pb.total_len(), 1);
        assert_eq!(pb.set(inj.obj("{}").unwrap()), ["{}->{1}[]⊗{}->{2}[]"]);
        assert!(check_presheaf_map(&inj, &pb, &y1, pr1.components()).unwrap().passed());
        assert!(check_presheaf_map(&inj, &pb, &y2, pr2.components()).unwrap().passed());
        let _ = ytop;
    }

    #[test]
    fn family_sizes() {
        let t = fixtures::triv3();
        assert_eq!(generated_family(t.cat(), 1).unwrap().len(), 3);
        assert_eq!(generated_family(t.cat(), 3).unwrap().len(), 3 + 6 + 10);
    }
}
