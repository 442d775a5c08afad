//! Brute-force limits and colimits of finite diagrams.
//!
//! Universality is decided by counting: a cone with apex `P` is a limit iff
//! for every object `X`, postcomposition `hom(X, P) → Cone(X)` is injective
//! and `|hom(X, P)| = |Cone(X)|`.

use std::collections::HashSet;

use super::{FinCat, MorId, ObjId};
use crate::error::{Error, Result};

/// A diagram in a category: vertices labelled by objects, arrows by morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    pub vertices: Vec<ObjId>,
    /// `(source vertex, target vertex, morphism)`.
    pub arrows: Vec<(usize, usize, MorId)>,
}

/// A cone (or cocone): an apex with one leg per diagram vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

/// A pullback of the cospan `f: A → C ← B: m`, with `f ∘ p = m ∘ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PullbackSquare {
    pub f: MorId,
    pub m: MorId,
    pub apex: ObjId,
    pub p: MorId,
    pub q: MorId,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Cone,
    Cocone,
}

impl Diagram {
    pub fn discrete(objects: &[ObjId]) -> Diagram {
        Diagram {
            vertices: objects.to_vec(),
            arrows: Vec::new(),
        }
    }

    pub fn cospan(c: &FinCat, f: MorId, m: MorId) -> Diagram {
        Diagram {
            vertices: vec![c.dom(f), c.dom(m), c.cod(f)],
            arrows: vec![(0, 2, f), (1, 2, m)],
        }
    }

    pub fn span(c: &FinCat, f: MorId, g: MorId) -> Diagram {
        Diagram {
            vertices: vec![c.dom(f), c.cod(f), c.cod(g)],
            arrows: vec![(0, 1, f), (0, 2, g)],
        }
    }

    pub fn parallel_pair(c: &FinCat, f: MorId, g: MorId) -> Diagram {
        Diagram {
            vertices: vec![c.dom(f), c.cod(f)],
            arrows: vec![(0, 1, f), (0, 1, g)],
        }
    }

    fn validate(&self, c: &FinCat) -> Result<()> {
        for &v in &self.vertices {
            c.check_obj(v)?;
        }
        for &(s, t, a) in &self.arrows {
            c.check_mor(a)?;
            let ok = s < self.vertices.len()
                && t < self.vertices.len()
                && c.dom(a) == self.vertices[s]
                && c.cod(a) == self.vertices[t];
            if !ok {
                return Err(Error::input(format!(
                    "diagram arrow `{}` does not match its vertices",
                    c.mor_name(a)
                )));
            }
        }
        Ok(())
    }
}

impl FinCat {
    /// All cones over `d` with apex `x`, lexicographically ordered by legs.
    pub fn cones(&self, d: &Diagram, x: ObjId) -> Vec<Vec<MorId>> {
        self.enumerate(d, x, Dir::Cone)
    }

    /// All cocones under `d` with apex `x`, lexicographically ordered.
    pub fn cocones(&self, d: &Diagram, x: ObjId) -> Vec<Vec<MorId>> {
        self.enumerate(d, x, Dir::Cocone)
    }

    fn leg_candidates(&self, d: &Diagram, x: ObjId, v: usize, dir: Dir) -> &[MorId] {
        match dir {
            Dir::Cone => self.hom(x, d.vertices[v]),
            Dir::Cocone => self.hom(d.vertices[v], x),
        }
    }

    /// Order vertices so that legs forced by an earlier leg come right after it.
    fn assignment_order(&self, d: &Diagram, dir: Dir) -> Vec<(usize, Option<(usize, MorId)>)> {
        let n = d.vertices.len();
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let forced = (0..n).filter(|&v| !done[v]).find_map(|v| {
                d.arrows.iter().find_map(|&(s, t, a)| match dir {
                    Dir::Cone if t == v && done[s] => Some((v, (s, a))),
                    Dir::Cocone if s == v && done[t] => Some((v, (t, a))),
                    _ => None,
                })
            });
            let (v, via) = match forced {
                Some((v, via)) => (v, Some(via)),
                None => ((0..n).find(|&v| !done[v]).expect("unassigned vertex"), None),
            };
            done[v] = true;
            order.push((v, via));
        }
        order
    }

    fn enumerate(&self, d: &Diagram, x: ObjId, dir: Dir) -> Vec<Vec<MorId>> {
        let order = self.assignment_order(d, dir);
        let mut legs: Vec<Option<MorId>> = vec![None; d.vertices.len()];
        let mut out = Vec::new();
        self.extend(d, x, dir, &order, 0, &mut legs, &mut out);
        out.sort();
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        d: &Diagram,
        x: ObjId,
        dir: Dir,
        order: &[(usize, Option<(usize, MorId)>)],
        k: usize,
        legs: &mut Vec<Option<MorId>>,
        out: &mut Vec<Vec<MorId>>,
    ) {
        if k == order.len() {
            out.push(legs.iter().map(|l| l.expect("assigned")).collect());
            return;
        }
        let (v, via) = order[k];
        let candidates: Vec<MorId> = match via {
            Some((u, a)) => {
                let lu = legs[u].expect("assigned earlier");
                vec![match dir {
                    Dir::Cone => self.compose(a, lu),
                    Dir::Cocone => self.compose(lu, a),
                }]
            }
            None => self.leg_candidates(d, x, v, dir).to_vec(),
        };
        for leg in candidates {
            legs[v] = Some(leg);
            let consistent = d.arrows.iter().all(|&(s, t, a)| match (legs[s], legs[t]) {
                (Some(ls), Some(lt)) => match dir {
                    Dir::Cone => self.compose(a, ls) == lt,
                    Dir::Cocone => self.compose(lt, a) == ls,
                },
                _ => true,
            });
            if consistent {
                self.extend(d, x, dir, order, k + 1, legs, out);
            }
        }
        legs[v] = None;
    }

    fn counts(&self, d: &Diagram, dir: Dir) -> Vec<usize> {
        self.objects().map(|x| self.enumerate(d, x, dir).len()).collect()
    }

    fn commutes(&self, d: &Diagram, cone: &Cone, dir: Dir) -> bool {
        cone.legs.len() == d.vertices.len()
            && d.vertices.iter().zip(&cone.legs).all(|(&v, &l)| match dir {
                Dir::Cone => self.dom(l) == cone.apex && self.cod(l) == v,
                Dir::Cocone => self.dom(l) == v && self.cod(l) == cone.apex,
            })
            && d.arrows.iter().all(|&(s, t, a)| match dir {
                Dir::Cone => self.compose(a, cone.legs[s]) == cone.legs[t],
                Dir::Cocone => self.compose(cone.legs[t], a) == cone.legs[s],
            })
    }

    fn universal(&self, d: &Diagram, cone: &Cone, dir: Dir, counts: &[usize]) -> bool {
        if !self.commutes(d, cone, dir) {
            return false;
        }
        self.objects().all(|x| {
            let maps = match dir {
                Dir::Cone => self.hom(x, cone.apex),
                Dir::Cocone => self.hom(cone.apex, x),
            };
            if maps.len() != counts[x.0] {
                return false;
            }
            let mut seen = HashSet::new();
            maps.iter().all(|&u| {
                let induced: Vec<MorId> = cone
                    .legs
                    .iter()
                    .map(|&l| match dir {
                        Dir::Cone => self.compose(l, u),
                        Dir::Cocone => self.compose(u, l),
                    })
                    .collect();
                seen.insert(induced)
            })
        })
    }

    fn canonical(&self, d: &Diagram, dir: Dir) -> Option<Cone> {
        let counts = self.counts(d, dir);
        for apex in self.objects() {
            for legs in self.enumerate(d, apex, dir) {
                let cone = Cone { apex, legs };
                if self.universal(d, &cone, dir, &counts) {
                    return Some(cone);
                }
            }
        }
        None
    }

    pub fn is_limit(&self, d: &Diagram, cone: &Cone) -> bool {
        self.universal(d, cone, Dir::Cone, &self.counts(d, Dir::Cone))
    }

    pub fn is_colimit(&self, d: &Diagram, cocone: &Cone) -> bool {
        self.universal(d, cocone, Dir::Cocone, &self.counts(d, Dir::Cocone))
    }

    /// The canonical limit: least apex id, then lexicographically least legs.
    pub fn limit(&self, d: &Diagram) -> Result<Option<Cone>> {
        d.validate(self)?;
        Ok(self.canonical(d, Dir::Cone))
    }

    /// The canonical colimit, chosen as for [`FinCat::limit`].
    pub fn colimit(&self, d: &Diagram) -> Result<Option<Cone>> {
        d.validate(self)?;
        Ok(self.canonical(d, Dir::Cocone))
    }

    /// The unique `u` with `limit.legs[v] ∘ u = cone.legs[v]` for all `v`.
    pub fn limit_mediator(&self, limit: &Cone, cone: &Cone) -> Option<MorId> {
        self.hom(cone.apex, limit.apex).iter().copied().find(|&u| {
            limit
                .legs
                .iter()
                .zip(&cone.legs)
                .all(|(&l, &c)| self.compose(l, u) == c)
        })
    }

    /// The unique `u` with `u ∘ colimit.legs[v] = cocone.legs[v]` for all `v`.
    pub fn colimit_mediator(&self, colimit: &Cone, cocone: &Cone) -> Option<MorId> {
        self.hom(colimit.apex, cocone.apex).iter().copied().find(|&u| {
            colimit
                .legs
                .iter()
                .zip(&cocone.legs)
                .all(|(&l, &c)| self.compose(u, l) == c)
        })
    }

    /// Canonical pullback of `f: A → C` and `m: B → C`.
    pub fn pullback(&self, f: MorId, m: MorId) -> Result<Option<PullbackSquare>> {
        self.check_mor(f)?;
        self.check_mor(m)?;
        if self.cod(f) != self.cod(m) {
            return Err(Error::input(format!(
                "`{}` and `{}` do not form a cospan",
                self.mor_name(f),
                self.mor_name(m)
            )));
        }
        let d = Diagram::cospan(self, f, m);
        Ok(self.canonical(&d, Dir::Cone).map(|c| PullbackSquare {
            f,
            m,
            apex: c.apex,
            p: c.legs[0],
            q: c.legs[1],
        }))
    }

    /// Whether `f ∘ p = m ∘ q` is a pullback square.
    pub fn is_pullback(&self, f: MorId, m: MorId, p: MorId, q: MorId) -> bool {
        if self.cod(f) != self.cod(m) || self.dom(p) != self.dom(q) {
            return false;
        }
        let d = Diagram::cospan(self, f, m);
        let cone = Cone {
            apex: self.dom(p),
            legs: vec![p, q, self.compose(f, p)],
        };
        self.is_limit(&d, &cone)
    }

    /// Canonical coequalizer `(Q, c)` of a parallel pair.
    pub fn coequalizer(&self, f: MorId, g: MorId) -> Result<Option<(ObjId, MorId)>> {
        self.check_mor(f)?;
        self.check_mor(g)?;
        if !self.parallel(f, g) {
            return Err(Error::input(format!(
                "`{}` and `{}` are not parallel",
                self.mor_name(f),
                self.mor_name(g)
            )));
        }
        let d = Diagram::parallel_pair(self, f, g);
        Ok(self.canonical(&d, Dir::Cocone).map(|c| (c.apex, c.legs[1])))
    }

    /// Canonical coproduct with its coprojections; the empty list asks for
    /// an initial object.
    pub fn coproduct(&self, objects: &[ObjId]) -> Result<Option<Cone>> {
        self.colimit(&Diagram::discrete(objects))
    }

    /// Canonical pushout of a span `f: A → B`, `g: A → C`; legs are
    /// `[A → P, B → P, C → P]`.
    pub fn pushout(&self, f: MorId, g: MorId) -> Result<Option<Cone>> {
        if self.dom(f) != self.dom(g) {
            return Err(Error::input("pushout needs a span"));
        }
        self.colimit(&Diagram::span(self, f, g))
    }
}

#[cfg(test)]
mod tests {
    use crate::fixtures;

    #[test]
    fn pullback_of_identities_is_identity() {
        let x = fixtures::triv3();
        let c = x.cat();
        let a = c.obj("A").unwrap();
        let sq = c.pullback(c.id(a), c.id(a)).unwrap().unwrap();
        assert_eq!((sq.apex, sq.p, sq.q), (a, c.id(a), c.id(a)));
    }

    #[test]
    fn disjoint_points_pull_back_to_empty() {
        let (c, _) = fixtures::inj2();
        let i1 = c.mor("{1}->{1,2}[1]").unwrap();
        let i2 = c.mor("{2}->{1,2}[2]").unwrap();
        let sq = c.pullback(i1, i2).unwrap().unwrap();
        assert_eq!(c.obj_name(sq.apex), "{}");
        assert!(c.is_pullback(i1, i2, sq.p, sq.q));
    }

    #[test]
    fn axis_meets_diagonal_in_zero() {
        let (c, _) = fixtures::ab2();
        let sq = c
            .pullback(c.mor("i1").unwrap(), c.mor("diag").unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(c.obj_name(sq.apex), "0");
    }

    #[test]
    fn non_cospan_is_input_error() {
        let (c, _) = fixtures::inj2();
        let i1 = c.mor("{1}->{1,2}[1]").unwrap();
        let id1 = c.id(c.obj("{1}").unwrap());
        assert!(c.pullback(i1, id1).unwrap_err().is_input_error());
        assert!(c.coequalizer(i1, id1).unwrap_err().is_input_error());
    }

    #[test]
    fn coequalizer_of_equal_maps_is_identity() {
        let (c, _) = fixtures::inj2();
        let f = c.mor("{1}->{1,2}[1]").unwrap();
        let (q, e) = c.coequalizer(f, f).unwrap().unwrap();
        assert_eq!(q, c.cod(f));
        assert!(c.is_iso(e));
    }

    #[test]
    fn coequalizer_of_two_points_is_a_point() {
        let (c, _) = fixtures::inj2();
        let f = c.mor("{1}->{1,2}[1]").unwrap();
        let g = c.mor("{1}->{1,2}[2]").unwrap();
        let (q, e) = c.coequalizer(f, g).unwrap().unwrap();
        assert_eq!(c.obj_name(q), "{1}");
        assert_eq!(c.mor_name(e), "{1,2}->{1}[11]");
    }

    #[test]
    fn coproducts() {
        let (c, _) = fixtures::inj2();
        let one = c.obj("{1}").unwrap();
        let two = c.obj("{2}").unwrap();
        let s = c.coproduct(&[one, two]).unwrap().unwrap();
        assert_eq!(c.obj_name(s.apex), "{1,2}");
        let names: Vec<&str> = s.legs.iter().map(|&l| c.mor_name(l)).collect();
        assert_eq!(names, ["{1}->{1,2}[1]", "{2}->{1,2}[2]"]);
        let single = c.coproduct(&[one]).unwrap().unwrap();
        assert_eq!((single.apex, single.legs.clone()), (one, vec![c.id(one)]));
        let empty = c.coproduct(&[]).unwrap().unwrap();
        assert_eq!(c.obj_name(empty.apex), "{}");

        let (ab, _) = fixtures::ab2();
        let z2 = ab.obj("Z2").unwrap();
        let s = ab.coproduct(&[z2, z2]).unwrap().unwrap();
        assert_eq!(ab.obj_name(s.apex), "Z2+Z2");
        let names: Vec<&str> = s.legs.iter().map(|&l| ab.mor_name(l)).collect();
        assert_eq!(names, ["i1", "i2"]);
    }

    #[test]
    fn triv3_lacks_coproducts_of_distinct_objects() {
        let x = fixtures::triv3();
        let c = x.cat();
        let (a, b) = (c.obj("A").unwrap(), c.obj("B").unwrap());
        assert!(c.coproduct(&[a, b]).unwrap().is_none());
        let (q, e) = c.coequalizer(c.id(a), c.id(a)).unwrap().unwrap();
        assert_eq!((q, e), (a, c.id(a)));
    }
}
