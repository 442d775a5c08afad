//! Finite-scale cocompleteness diagnostics for M-categories: the coproduct,
//! coequalizer and pullback-stability conditions, M-extensivity, and the
//! colimit lemmas as property suites.
//!
//! Only diagrams of a few small shapes are quantified over; every report
//! carries the bound in its `truncation` header.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Cone, Diagram, FinCat, MorId, ObjId};
use crate::mcat::{MSystem, Par};
use crate::report::{CheckReport, Truncation};

pub const DEFAULT_SHAPE_BOUND: usize = 3;

/// Index shapes for finite diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Discrete(usize),
    ParallelPair,
    Span,
}

impl Shape {
    pub fn label(self) -> String {
        match self {
            Shape::Discrete(n) => format!("discrete-{n}"),
            Shape::ParallelPair => "parallel-pair".to_string(),
            Shape::Span => "span".to_string(),
        }
    }

    fn objects(self) -> usize {
        match self {
            Shape::Discrete(n) => n,
            Shape::ParallelPair => 2,
            Shape::Span => 3,
        }
    }

    fn arrows(self) -> usize {
        match self {
            Shape::Discrete(_) => 0,
            Shape::ParallelPair | Shape::Span => 2,
        }
    }
}

/// Shapes with at most `bound` objects: discrete with at least two objects,
/// the parallel pair and the span.
pub fn shapes(bound: usize) -> Vec<Shape> {
    let mut out: Vec<Shape> = (2..=bound).map(Shape::Discrete).collect();
    out.extend(
        [Shape::ParallelPair, Shape::Span]
            .into_iter()
            .filter(|s| s.objects() <= bound),
    );
    out
}

fn truncation(bound: usize) -> Truncation {
    let shapes = shapes(bound);
    Truncation {
        max_shape_objects: bound,
        max_nonidentity_arrows: shapes.iter().map(|s| s.arrows()).max().unwrap_or(0),
        shapes: shapes.iter().map(|s| s.label()).collect(),
    }
}

/// Nondecreasing `n`-tuples drawn from `items`.
fn multisets<T: Copy>(items: &[T], n: usize) -> Vec<Vec<T>> {
    fn go<T: Copy>(items: &[T], start: usize, n: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, i, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, n, &mut Vec::new(), &mut out);
    out
}

/// Every diagram of `shape` in `c`; pairs of arrows are taken up to order.
pub fn shape_instances(c: &FinCat, shape: Shape) -> Vec<Diagram> {
    let objs: Vec<ObjId> = c.objects().collect();
    let mors: Vec<MorId> = c.morphisms().collect();
    match shape {
        Shape::Discrete(n) => multisets(&objs, n).iter().map(|t| Diagram::discrete(t)).collect(),
        Shape::ParallelPair => multisets(&mors, 2)
            .into_iter()
            .filter(|p| c.parallel(p[0], p[1]))
            .map(|p| Diagram::parallel_pair(c, p[0], p[1]))
            .collect(),
        Shape::Span => multisets(&mors, 2)
            .into_iter()
            .filter(|p| c.dom(p[0]) == c.dom(p[1]))
            .map(|p| Diagram::span(c, p[0], p[1]))
            .collect(),
    }
}

fn join(c: &FinCat, ms: &[MorId]) -> String {
    ms.iter().map(|&m| c.mor_name(m)).collect::<Vec<_>>().join(",")
}

fn describe(c: &FinCat, d: &Diagram) -> String {
    if d.arrows.is_empty() {
        let names: Vec<&str> = d.vertices.iter().map(|&v| c.obj_name(v)).collect();
        format!("[{}]", names.join(","))
    } else {
        let arrows: Vec<MorId> = d.arrows.iter().map(|a| a.2).collect();
        format!("[{}]", join(c, &arrows))
    }
}

/// Pull `mu: P → colim K` back along each coprojection: `alpha_i: H_i → K_i`,
/// `p_i: H_i → P`, and `H(u)` the unique map into the pullback at the target.
fn pull_back_diagram(c: &FinCat, k: &Diagram, colim: &Cone, mu: MorId) -> Result<(Diagram, Vec<MorId>, Vec<MorId>)> {
    let mut alpha = Vec::new();
    let mut p = Vec::new();
    for &q in &colim.legs {
        let sq = c
            .pullback(q, mu)?
            .ok_or_else(|| Error::precondition("a member has no pullback"))?;
        alpha.push(sq.p);
        p.push(sq.q);
    }
    let mut arrows = Vec::new();
    for &(s, t, u) in &k.arrows {
        let w = c
            .hom(c.dom(alpha[s]), c.dom(alpha[t]))
            .iter()
            .copied()
            .find(|&w| c.compose(alpha[t], w) == c.compose(u, alpha[s]) && c.compose(p[t], w) == p[s])
            .ok_or_else(|| Error::internal("no mediator into a pullback"))?;
        arrows.push((s, t, w));
    }
    let h = Diagram {
        vertices: alpha.iter().map(|&a| c.dom(a)).collect(),
        arrows,
    };
    Ok((h, alpha, p))
}

fn check_msystem_valid(c: &FinCat, ms: &MSystem) -> Result<()> {
    let members: Vec<MorId> = ms.members().collect();
    let r = crate::mcat::check_msystem(c, &members)?;
    if r.passed() {
        Ok(())
    } else {
        Err(Error::Laws(Box::new(r)))
    }
}

/// The coproduct condition, the coequalizer condition and
/// stability of colimits under pullback along members.
pub fn check_cocompleteness_conditions(c: &FinCat, ms: &MSystem, shape_bound: usize) -> Result<CheckReport> {
    check_msystem_valid(c, ms)?;
    let mut r = CheckReport::new("cocompleteness");
    r.truncation = Some(truncation(shape_bound));
    let members: Vec<MorId> = ms.members().collect();

    // Coproducts of members.
    for n in 2..=shape_bound {
        for family in multisets(&members, n) {
            let doms: Vec<ObjId> = family.iter().map(|&m| c.dom(m)).collect();
            let cods: Vec<ObjId> = family.iter().map(|&m| c.cod(m)).collect();
            let (Some(sa), Some(sb)) = (c.coproduct(&doms)?, c.coproduct(&cods)?) else {
                let objs = describe(c, &Diagram::discrete(&cods));
                r.skip("coproduct/missing-coproduct", [("objects", objs)]);
                continue;
            };
            let legs = family.iter().zip(&sb.legs).map(|(&m, &q)| c.compose(q, m)).collect();
            let sum = c
                .colimit_mediator(&sa, &Cone { apex: sb.apex, legs })
                .ok_or_else(|| Error::internal("no mediator out of a coproduct"))?;
            let fam = join(c, &family);
            r.expect("coproduct/sum-is-member", ms.contains(sum), || {
                vec![("members", fam.clone()), ("sum", c.mor_name(sum).to_string())]
            });
            for (i, &m) in family.iter().enumerate() {
                let ok = c.is_pullback(sb.legs[i], sum, m, sa.legs[i]);
                r.expect("coproduct/coprojection-pullback", ok, || {
                    vec![
                        ("members", fam.clone()),
                        ("sum", c.mor_name(sum).to_string()),
                        ("index", i.to_string()),
                    ]
                });
            }
        }
    }

    // Coequalizers against a member pulled back to the same subobject.
    for &m in &members {
        let x = c.cod(m);
        let into: Vec<MorId> = c.into_obj(x);
        for pair in multisets(&into, 2) {
            let (f, g) = (pair[0], pair[1]);
            if !c.parallel(f, g) {
                continue;
            }
            let (Some(pf), Some(pg)) = (c.pullback(f, m)?, c.pullback(g, m)?) else {
                continue;
            };
            let Some(phi) = c
                .isos(pf.apex, pg.apex)
                .into_iter()
                .find(|&phi| c.compose(pg.p, phi) == pf.p)
            else {
                continue;
            };
            let (f2, g2) = (pf.q, c.compose(pg.q, phi));
            let w = || {
                vec![
                    ("m", c.mor_name(m).to_string()),
                    ("f", c.mor_name(f).to_string()),
                    ("g", c.mor_name(g).to_string()),
                ]
            };
            let (Some(co), Some(co2)) = (
                c.colimit(&Diagram::parallel_pair(c, f, g))?,
                c.colimit(&Diagram::parallel_pair(c, f2, g2))?,
            ) else {
                r.skip("coequalizer/missing-coequalizer", w());
                continue;
            };
            let (cq, cq2) = (co.legs[1], co2.legs[1]);
            let cm = c.compose(cq, m);
            let cocone = Cone {
                apex: co.apex,
                legs: vec![c.compose(cm, f2), cm],
            };
            let n = c
                .colimit_mediator(&co2, &cocone)
                .ok_or_else(|| Error::internal("no mediator out of a coequalizer"))?;
            r.expect("coequalizer/induced-is-member", ms.contains(n), w);
            r.expect("coequalizer/induced-pullback", c.is_pullback(cq, n, m, cq2), w);
        }
    }

    // Colimits are stable under pullback along members.
    for shape in shapes(shape_bound) {
        for k in shape_instances(c, shape) {
            let Some(colim) = c.colimit(&k)? else {
                r.skip(
                    "pullback-stable/missing-colimit",
                    [("shape", shape.label()), ("diagram", describe(c, &k))],
                );
                continue;
            };
            for mu in ms.into_obj(c, colim.apex).collect::<Vec<_>>() {
                let (h, alpha, p) = pull_back_diagram(c, &k, &colim, mu)?;
                let ok = c.is_colimit(
                    &h,
                    &Cone {
                        apex: c.dom(mu),
                        legs: p.clone(),
                    },
                );
                r.expect("pullback-stable/pullback-of-colimit", ok, || {
                    vec![
                        ("shape", shape.label()),
                        ("diagram", describe(c, &k)),
                        ("member", c.mor_name(mu).to_string()),
                        ("pulled-back", join(c, &alpha)),
                        ("legs", join(c, &p)),
                    ]
                });
            }
        }
    }
    Ok(r.finish())
}

/// For coproduct injections `ι_i: B_i → ΣB`, a member `m: Z → ΣB`, members
/// `m_i: A_i → B_i` and `a_i` with `m∘a_i = ι_i∘m_i`: the `a_i` form a
/// coproduct iff every square is a pullback.
pub fn check_m_extensive(c: &FinCat, ms: &MSystem, shape_bound: usize) -> Result<CheckReport> {
    check_msystem_valid(c, ms)?;
    let mut r = CheckReport::new("m-extensive");
    r.truncation = Some(truncation(shape_bound));
    let objs: Vec<ObjId> = c.objects().collect();
    for n in 2..=shape_bound {
        for bs in multisets(&objs, n) {
            let Some(sum) = c.coproduct(&bs)? else {
                r.skip("missing-coproduct", [("objects", describe(c, &Diagram::discrete(&bs)))]);
                continue;
            };
            let per_summand: Vec<Vec<MorId>> = bs.iter().map(|&b| ms.into_obj(c, b).collect()).collect();
            for m in ms.into_obj(c, sum.apex).collect::<Vec<_>>() {
                let z = c.dom(m);
                let mut choice = vec![0usize; n];
                'tuples: loop {
                    let mis: Vec<MorId> = (0..n).map(|i| per_summand[i][choice[i]]).collect();
                    let a: Option<Vec<MorId>> = (0..n)
                        .map(|i| {
                            let target = c.compose(sum.legs[i], mis[i]);
                            c.hom(c.dom(mis[i]), z)
                                .iter()
                                .copied()
                                .find(|&a| c.compose(m, a) == target)
                        })
                        .collect();
                    if let Some(a) = a {
                        let doms: Vec<ObjId> = mis.iter().map(|&mi| c.dom(mi)).collect();
                        let coproduct = c.is_colimit(
                            &Diagram::discrete(&doms),
                            &Cone {
                                apex: z,
                                legs: a.clone(),
                            },
                        );
                        let pullbacks = (0..n).all(|i| c.is_pullback(sum.legs[i], m, mis[i], a[i]));
                        r.expect("coproduct-iff-pullbacks", coproduct == pullbacks, || {
                            vec![
                                ("m", c.mor_name(m).to_string()),
                                ("members", join(c, &mis)),
                                ("top", join(c, &a)),
                                ("top-is-coproduct", coproduct.to_string()),
                                ("squares-are-pullbacks", pullbacks.to_string()),
                            ]
                        });
                    }
                    for i in 0..n {
                        choice[i] += 1;
                        if choice[i] < per_summand[i].len() {
                            continue 'tuples;
                        }
                        choice[i] = 0;
                    }
                    break;
                }
            }
        }
    }
    Ok(r.finish())
}

/// A transformation `alpha: H ⇒ K` between diagrams of the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDiagram {
    pub shape: Shape,
    pub k: Diagram,
    pub h: Diagram,
    pub alpha: Vec<MorId>,
}

impl FiniteDiagram {
    /// Build from `K` and components; `H` is forced on arrows by
    /// `alpha_t ∘ H(u) = K(u) ∘ alpha_s`, so `None` if some `H(u)` is missing
    /// or not unique.
    pub fn new(c: &FinCat, shape: Shape, k: Diagram, alpha: Vec<MorId>) -> Result<Option<FiniteDiagram>> {
        if alpha.len() != k.vertices.len() || alpha.iter().zip(&k.vertices).any(|(&a, &v)| c.cod(a) != v) {
            return Err(Error::input("components do not land in the diagram"));
        }
        let mut arrows = Vec::new();
        for &(s, t, u) in &k.arrows {
            let target = c.compose(u, alpha[s]);
            let hs: Vec<MorId> = c
                .hom(c.dom(alpha[s]), c.dom(alpha[t]))
                .iter()
                .copied()
                .filter(|&w| c.compose(alpha[t], w) == target)
                .collect();
            match hs.as_slice() {
                [w] => arrows.push((s, t, *w)),
                _ => return Ok(None),
            }
        }
        let h = Diagram {
            vertices: alpha.iter().map(|&a| c.dom(a)).collect(),
            arrows,
        };
        Ok(Some(FiniteDiagram { shape, k, h, alpha }))
    }

    pub fn describe(&self, c: &FinCat) -> String {
        format!(
            "{} K{} alpha[{}]",
            self.shape.label(),
            describe(c, &self.k),
            join(c, &self.alpha)
        )
    }
}

/// Every diagram of every shape within `bound` with member components.
pub fn generate_diagrams(c: &FinCat, ms: &MSystem, bound: usize) -> Result<Vec<FiniteDiagram>> {
    let mut out = Vec::new();
    for shape in shapes(bound) {
        for k in shape_instances(c, shape) {
            let per: Vec<Vec<MorId>> = k.vertices.iter().map(|&v| ms.into_obj(c, v).collect()).collect();
            let mut families: Vec<Vec<MorId>> = vec![Vec::new()];
            for options in &per {
                families = families
                    .into_iter()
                    .flat_map(|f| {
                        options.iter().map(move |&m| {
                            let mut g = f.clone();
                            g.push(m);
                            g
                        })
                    })
                    .collect();
            }
            for alpha in families {
                if let Some(d) = FiniteDiagram::new(c, shape, k.clone(), alpha)? {
                    out.push(d);
                }
            }
        }
    }
    Ok(out)
}

fn in_par(par: &Par, d: &Diagram) -> Diagram {
    Diagram {
        vertices: d.vertices.clone(),
        arrows: d.arrows.iter().map(|&(s, t, u)| (s, t, par.total(u))).collect(),
    }
}

fn total_cone(par: &Par, cone: &Cone) -> Cone {
    Cone {
        apex: cone.apex,
        legs: cone.legs.iter().map(|&l| par.total(l)).collect(),
    }
}

/// The colimit laws on each diagram whose hypotheses hold: member
/// components, pullback naturality squares, and colimits of `H` and `K` that
/// exist in `C` and stay colimits in `Par(C)` (the finite stand-in for a
/// cocomplete M-category). Conclusions:
/// - `colimit-of-restrictions`: the mediator of `(α_i, α_i)` in `Par(C)` is a restriction idempotent;
/// - `colimit-of-members`: `colim α` is a member and its coprojection squares are pullbacks;
/// - `pullback-cancellation`: for a member `n` and `y` with outer squares pullbacks, the right
///   square is a pullback;
/// - `stability`: pulling `colim K` back along a member yields a colimit of `H`
///   whenever `α` arises that way.
pub fn lemma_suite(par: &Par, diagrams: &[FiniteDiagram]) -> Result<CheckReport> {
    let c = par.base();
    let ms = par.msystem();
    let pc = par.cat();
    let x = par.restr();
    let mut r = CheckReport::new("colimit-lemmas");
    let bound = diagrams.iter().map(|d| d.shape.objects()).max().unwrap_or(0);
    r.truncation = Some(truncation(bound));

    // Many diagrams share `H` or `K`; colimits are computed once each.
    let mut cache: HashMap<Diagram, Option<(Cone, bool)>> = HashMap::new();
    let mut colimit_in_par = |d: &Diagram| -> Result<Option<(Cone, bool)>> {
        if let Some(hit) = cache.get(d) {
            return Ok(hit.clone());
        }
        let found = c.colimit(d)?.map(|cone| {
            let kept = pc.is_colimit(&in_par(par, d), &total_cone(par, &cone));
            (cone, kept)
        });
        cache.insert(d.clone(), found.clone());
        Ok(found)
    };

    let squares: RefCell<HashMap<[MorId; 4], bool>> = RefCell::new(HashMap::new());
    let is_pb = |f: MorId, m: MorId, p: MorId, q: MorId| -> bool {
        *squares
            .borrow_mut()
            .entry([f, m, p, q])
            .or_insert_with(|| c.is_pullback(f, m, p, q))
    };

    let mut unmet_counts: BTreeMap<(Shape, &'static str), usize> = BTreeMap::new();
    for d in diagrams {
        let name = d.describe(c);
        let mut unmet = |why: &'static str| *unmet_counts.entry((d.shape, why)).or_insert(0) += 1;
        if !d.alpha.iter().all(|&a| ms.contains(a)) {
            unmet("component-not-member");
            continue;
        }
        let natural_pullbacks =
            d.k.arrows
                .iter()
                .zip(&d.h.arrows)
                .all(|(&(s, t, ku), &(_, _, hu))| is_pb(ku, d.alpha[t], d.alpha[s], hu));
        if !natural_pullbacks {
            unmet("naturality-square-not-pullback");
            continue;
        }
        let (Some((ch, h_kept)), Some((ck, k_kept))) = (colimit_in_par(&d.h)?, colimit_in_par(&d.k)?) else {
            unmet("missing-colimit");
            continue;
        };
        if !h_kept || !k_kept {
            unmet("colimit-not-preserved-in-par");
            continue;
        }
        let pk = total_cone(par, &ck);
        let w = || vec![("diagram", name.clone())];

        // The restrictions ε_i = (α_i, α_i) over i∘K have an idempotent colimit.
        let eps: Vec<MorId> = d.alpha.iter().map(|&a| par.class_of(a, a)).collect::<Result<_>>()?;
        let cocone = Cone {
            apex: pk.apex,
            legs: pk.legs.iter().zip(&eps).map(|(&q, &e)| pc.compose(q, e)).collect(),
        };
        let colim_eps = pc.colimit_mediator(&pk, &cocone);
        r.expect(
            "colimit-of-restrictions/restriction-idempotent",
            colim_eps.is_some_and(|e| x.is_restriction_idempotent(e)),
            w,
        );

        // colim α is a member with pullback coprojection squares.
        let cocone = Cone {
            apex: ck.apex,
            legs: ck.legs.iter().zip(&d.alpha).map(|(&q, &a)| c.compose(q, a)).collect(),
        };
        let colim_alpha = c
            .colimit_mediator(&ch, &cocone)
            .ok_or_else(|| Error::internal("no mediator out of a colimit"))?;
        r.expect("colimit-of-members/member", ms.contains(colim_alpha), w);
        for (i, &a) in d.alpha.iter().enumerate() {
            let ok = is_pb(ck.legs[i], colim_alpha, a, ch.legs[i]);
            r.expect("colimit-of-members/coprojection-pullback", ok, || {
                vec![("diagram", name.clone()), ("index", i.to_string())]
            });
        }

        // Pullback cancellation for every member n and every y out of colim K.
        for n in ms.members() {
            for &y in c.hom(ck.apex, c.cod(n)) {
                let target = c.compose(y, colim_alpha);
                let Some(xm) = c
                    .hom(ch.apex, c.dom(n))
                    .iter()
                    .copied()
                    .find(|&xm| c.compose(n, xm) == target)
                else {
                    continue;
                };
                let outer = d
                    .alpha
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| is_pb(c.compose(y, ck.legs[i]), n, a, c.compose(xm, ch.legs[i])));
                if !outer {
                    continue;
                }
                r.expect(
                    "pullback-cancellation/right-square-pullback",
                    is_pb(y, n, colim_alpha, xm),
                    || {
                        vec![
                            ("diagram", name.clone()),
                            ("n", c.mor_name(n).to_string()),
                            ("y", c.mor_name(y).to_string()),
                        ]
                    },
                );
            }
        }

        // Stability: α is the pullback of some member μ along the coprojections.
        for mu in ms.into_obj(c, ck.apex).collect::<Vec<_>>() {
            let (h2, alpha2, p) = pull_back_diagram(c, &d.k, &ck, mu)?;
            if h2.vertices != d.h.vertices || alpha2 != d.alpha {
                continue;
            }
            let ok = c.is_colimit(
                &d.h,
                &Cone {
                    apex: c.dom(mu),
                    legs: p,
                },
            );
            r.expect("stability/pullback-of-colimit", ok, || {
                vec![("diagram", name.clone()), ("member", c.mor_name(mu).to_string())]
            });
        }
    }
    for ((shape, why), n) in unmet_counts {
        r.skip(
            "hypothesis-unmet",
            [
                ("shape", shape.label()),
                ("reason", why.to_string()),
                ("diagrams", n.to_string()),
            ],
        );
    }
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn multisets_count() {
        assert_eq!(multisets(&[1, 2, 3, 4], 2).len(), 10);
        assert_eq!(multisets(&[1, 2, 3, 4], 3).len(), 20);
    }

    #[test]
    fn shapes_respect_bound() {
        let labels: Vec<String> = shapes(3).iter().map(|s| s.label()).collect();
        assert_eq!(labels, ["discrete-2", "discrete-3", "parallel-pair", "span"]);
        assert_eq!(shapes(2).len(), 2);
    }

    #[test]
    fn inj2_passes_conditions() {
        let (c, ms) = fixtures::inj2();
        let r = check_cocompleteness_conditions(&c, &ms, DEFAULT_SHAPE_BOUND).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.truncation.is_some());
        let r = check_m_extensive(&c, &ms, DEFAULT_SHAPE_BOUND).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn ab2_fails_through_the_diagonal() {
        let (c, ms) = fixtures::ab2();
        let r = check_cocompleteness_conditions(&c, &ms, DEFAULT_SHAPE_BOUND).unwrap();
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.mentions("diag")));
        let r = check_m_extensive(&c, &ms, DEFAULT_SHAPE_BOUND).unwrap();
        assert!(r.violations.iter().any(|v| v.witness["m"] == "diag"), "{}", r.to_text());
    }

    #[test]
    fn constant_diagram_is_trivial() {
        let (c, ms) = fixtures::inj2();
        let a = c.obj("{1}").unwrap();
        let b = c.obj("{2}").unwrap();
        let k = Diagram::discrete(&[a, b]);
        let d = FiniteDiagram::new(&c, Shape::Discrete(2), k.clone(), vec![c.id(a), c.id(b)])
            .unwrap()
            .unwrap();
        assert_eq!(d.h, k);
        let par = Par::new(&c, &ms).unwrap();
        let r = lemma_suite(&par, &[d]).unwrap();
        assert!(r.passed() && r.not_applicable.is_empty(), "{}", r.to_text());
    }
}
